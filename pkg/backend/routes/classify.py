# backend/routes/classify.py
from flask import Blueprint, jsonify

from middleware import request_body, require_msc
from models import FamilyLabel
from routes.errors import error_response
from services import canonicalizer
from services.fields import field_from_name


classify_bp = Blueprint("classify", __name__)


@classify_bp.route("", methods=["POST"])
@require_msc("msc")
def classify(msc):
    """POST /api/classify - Canonical family, witness and result field of one MSC."""
    try:
        result = canonicalizer.canonicalize(msc)
        return jsonify(result.to_dict())
    except Exception as e:
        return error_response(e, "classify")


@classify_bp.route("/isomorphic", methods=["POST"])
@require_msc("a", "b")
def isomorphic(a, b):
    """POST /api/classify/isomorphic - Isomorphism verdict with a witness."""
    try:
        witness = canonicalizer.is_isomorphic(a, b)
        return jsonify({
            "isomorphic": witness is not None,
            "witness": None if witness is None else witness.to_rows(),
            "field": a.field.name if witness is None else witness.field.name,
        })
    except Exception as e:
        return error_response(e, "compare algebras")


@classify_bp.route("/materialize", methods=["POST"])
def materialize():
    """POST /api/classify/materialize - The canonical MSC of a family member."""
    try:
        body = request_body()
        field_name = body.get("field")
        family = body.get("family")
        params = body.get("params", [])

        if not field_name or family is None:
            return jsonify({"error": "Missing required fields"}), 400
        if not isinstance(params, list):
            return jsonify({"error": "params must be a list"}), 400

        field = field_from_name(field_name)
        if isinstance(family, bool):
            return jsonify({"error": "family must be a number or a name like A7"}), 400
        number = family if isinstance(family, int) else canonicalizer.family_from_name(str(family))
        label = FamilyLabel(
            canonicalizer.char_class_of(field),
            number,
            tuple(field.parse(x) for x in params),
        )
        return jsonify(canonicalizer.materialize(label, field).to_dict())
    except Exception as e:
        return error_response(e, "materialize family")
