from functools import wraps
from flask import request, jsonify

from exceptions import CanonixError
from models import MSC


def request_body():
    """JSON body of the current request, or an empty dict."""
    body = request.get_json(silent=True)
    return body if isinstance(body, dict) else {}


def require_msc(*names):
    """Decorator to parse MSC payloads from the JSON body before a route runs.

    Each name is a body key holding {"field": "p^k", "entries": [[...], [...]]};
    a top-level "field" is used for payloads that omit their own.
    """
    def decorator(f):
        @wraps(f)
        def decorated_function(*args, **kwargs):
            body = request_body()
            field = body.get("field")
            for name in names:
                payload = body.get(name)
                if payload is None:
                    return jsonify({"error": f"Missing required field: {name}"}), 400
                if isinstance(payload, dict) and "field" not in payload and field is not None:
                    payload = {**payload, "field": field}
                elif not isinstance(payload, dict):
                    payload = {"field": field, "entries": payload}
                try:
                    kwargs[name] = MSC.from_dict(payload)
                except (ValueError, CanonixError) as e:
                    return jsonify({"error": f"Invalid {name}: {str(e)}"}), 400
            return f(*args, **kwargs)

        return decorated_function

    return decorator
