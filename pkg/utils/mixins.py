import logging
import time


class LoggingMixin:
    """
    Mixin to log the execution of management commands.

    Methods:
        execute(*args, **options): Logs the command name and its options before
            running it, and the outcome with the elapsed time afterwards.
    """

    logger = logging.getLogger("custom_commands")

    def execute(self, *args, **options):
        command = self.__class__.__module__.rsplit(".", 1)[-1]
        shown = {
            key: value
            for key, value in options.items()
            if key not in ("stdout", "stderr", "skip_checks") and value is not None
        }
        self.logger.info(f"Command: {command}, Args: {args}, Options: {shown}")

        started = time.perf_counter()
        try:
            output = super().execute(*args, **options)
        except Exception as exc:
            self.logger.error(f"Command: {command}, Failed: {exc}")
            raise

        self.logger.info(
            f"Command: {command}, Finished in {time.perf_counter() - started:.2f}s"
        )
        return output
