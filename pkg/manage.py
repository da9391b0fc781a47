#!/usr/bin/env python
"""Django's command-line utility; also the hypomix command line."""
import os
import sys


def _setup():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    return execute_from_command_line


def _unknown_subcommand(argv) -> bool:
    import django
    from django.core.management import get_commands

    django.setup()
    if not argv or argv[0].startswith('-') or argv[0] in ('help', 'version'):
        return False
    return argv[0] not in get_commands()


def cli(argv=None) -> int:
    """
    Run one subcommand (``simulate``, ``oracle``, ``verify``, ``sweep``,
    ``certify``, ``constants``) and return its exit code.
    """
    execute = _setup()
    argv = list(sys.argv[1:] if argv is None else argv)
    if _unknown_subcommand(argv):
        from apps.runs.writers import dumps

        sys.stderr.write(dumps({'error': 'unknown_command', 'message': f"Unknown subcommand '{argv[0]}'."}))
        return 2
    try:
        execute(['hypomix'] + argv)
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 2
    return 0


def main():
    """Run administrative tasks."""
    execute = _setup()
    execute(sys.argv)


if __name__ == '__main__':
    main()
