"""
Тесты проверочного движка.
"""
