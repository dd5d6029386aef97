# backend/routes/oracle.py
from flask import Blueprint, jsonify

import config
from exceptions import MalformedInputError
from middleware import request_body, require_msc
from routes.errors import error_response
from services import oracle
from services.fields import field_from_name


oracle_bp = Blueprint("oracle", __name__)


@oracle_bp.route("/orbit", methods=["POST"])
@require_msc("msc")
def orbit(msc):
    """POST /api/oracle/orbit - Orbit size, least representative and label."""
    try:
        return jsonify(oracle.orbit(msc).to_dict())
    except Exception as e:
        return error_response(e, "enumerate orbit")


@oracle_bp.route("/census", methods=["POST"])
def census():
    """POST /api/oracle/census - Full orbit census over a small field."""
    try:
        body = request_body()
        field_name = body.get("field")
        if not field_name:
            return jsonify({"error": "Missing required field: field"}), 400

        max_q = body.get("maxQ")
        if max_q is not None and (not isinstance(max_q, int) or isinstance(max_q, bool)):
            return jsonify({"error": "maxQ must be an integer"}), 400
        if max_q is not None and max_q > config.CENSUS_MAX_Q:
            raise MalformedInputError(f"maxQ may only lower the census bound q <= {config.CENSUS_MAX_Q}")

        table = oracle.census(field_from_name(field_name), max_q=max_q)
        return jsonify(table.to_dict())
    except Exception as e:
        return error_response(e, "run census")
