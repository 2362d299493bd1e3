"""Configuración y modelos de ejecución"""
