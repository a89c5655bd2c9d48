import logging
import time
from functools import wraps

from flask import jsonify, request

from utils.Exceptions import InputError

logger = logging.getLogger("slidebench.actions")


def _status_of(response):
    if isinstance(response, tuple) and len(response) > 1:
        return response[1]
    return getattr(response, "status_code", 200)


def log_action(action, target):
    """
    Log every call of a route handler with its outcome and duration.

    InputError becomes a 400 JSON error; anything else a 500.
    """
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            started = time.perf_counter()
            try:
                response = func(*args, **kwargs)
            except InputError as e:
                response = (jsonify({"error": str(e), "type": type(e).__name__}), 400)
            except Exception:
                logger.exception("%s %s failed", action, target)
                response = (jsonify({"error": "internal error"}), 500)
            elapsed_ms = (time.perf_counter() - started) * 1000.0
            logger.info("%s %s status=%s remote=%s %.1fms", action, target,
                        _status_of(response), request.remote_addr, elapsed_ms)
            return response
        return wrapper
    return decorator
