"""
Интерфейс командной строки sslvm.
"""
