"""Configuration module for DR Impute Sim."""

from .settings import *
