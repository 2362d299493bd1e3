"""Núcleo tensorial: tipos de estado, operaciones multipartitas, E/S de matrices"""
