"""hypomix Django project."""
