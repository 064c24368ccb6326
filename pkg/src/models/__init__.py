"""Data models and schema definitions."""