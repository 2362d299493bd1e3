"""Infraestructura: logging, métricas"""
