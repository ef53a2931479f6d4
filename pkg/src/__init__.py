# Скалярные произведения H¹ и L² на ячейках с дырами
