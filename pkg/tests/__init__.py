# Тесты для расчёта скалярных произведений на ячейках с дырами
