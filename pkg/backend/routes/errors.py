# backend/routes/errors.py
from flask import jsonify

import config
from exceptions import CanonicalizationError, ExtensionCapError, PolicyBoundError


def error_response(e: Exception, action: str):
    """Map a library error onto the JSON error body and status code the routes share."""
    if isinstance(e, (PolicyBoundError, ExtensionCapError)):
        return jsonify({"error": str(e)}), 422
    if isinstance(e, ValueError) and not isinstance(e, CanonicalizationError):
        return jsonify({"error": str(e)}), 400
    if config.IS_PRODUCTION:
        return jsonify({"error": f"Failed to {action}"}), 500
    return jsonify({"error": f"Failed to {action}: {str(e)}"}), 500
