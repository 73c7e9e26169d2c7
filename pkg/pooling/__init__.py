"""Multiple-imputation pooling for DR Impute Sim."""

from pooling.rubin import PooledResult, normal_interval, pool_rubin, rubin_dof

__all__ = ['PooledResult', 'normal_interval', 'pool_rubin', 'rubin_dof']
