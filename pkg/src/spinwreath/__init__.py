"""Exact spin character tables and twisted vertex operators for wreath
product double covers of finite groups."""

__version__ = "0.1.0"
