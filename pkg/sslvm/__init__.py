"""
sslvm — GP-LVM со spike-and-slab априорным распределением (SSGP-LVM) и его
многовидовое расширение (SSMRD): ψ-статистики, нижняя граница, обучение,
вывод латентных координат для новых точек и оценка качества.
"""

__version__ = "0.1.0"
