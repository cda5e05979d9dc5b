import os
import sys

SUBCOMMANDS = ("run", "gen", "eval")
USAGE = """usage: css <command> [options]

commands:
  run   <config> [--jobs N] [--seed S] [--trials T] [--alpha A ...] [--out PATH]
        [--compare-uniform]
  gen   <synthetic-spec> --out PATH [--seed S]
  eval  --matrix PATH --columns i,j,k [--kind KIND] [--k K]

`css <command> --help` shows the options of a command.
"""


def main(argv=None):
    """
    Console entry point: ``css <command>`` runs ``manage.py css_<command>``.
    """

    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv or argv[0] in ("-h", "--help"):
        sys.stdout.write(USAGE)
        return 0
    if argv[0] not in SUBCOMMANDS:
        sys.stderr.write(f"css: unknown command {argv[0]!r}\n\n{USAGE}")
        return 2

    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings")
    from django.core.management import execute_from_command_line

    execute_from_command_line(["css", f"css_{argv[0]}", *argv[1:]])
    return 0


if __name__ == "__main__":
    sys.exit(main())
