# Kvazi-Kulon seriyasi - ikki o'lchamli uch jism tizimi
# Quasi-Coulomb series in a two-dimensional heavy-heavy-light system

__version__ = "1.0.0"
