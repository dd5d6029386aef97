#!/usr/bin/env python3
"""
Bridge witness search for Canonix
Re-derives the witnesses that carry (1,0,0,0; 0,-1,-1,0) onto family 10 by
brute force and prints them next to the stored ones.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "backend"))

from models import FamilyLabel  # noqa: E402
from services import canonicalizer, msc_core, oracle  # noqa: E402
from services.fields import field_from_name  # noqa: E402

FIELDS = ["7^1", "5^1", "2^1", "3^1"]


def find_witness(name):
    """Search GL(2) over one field and compare with the stored witness."""
    field = field_from_name(name)
    source = canonicalizer.bridge_source(field)
    target = canonicalizer.materialize(FamilyLabel(canonicalizer.char_class_of(field), 10), field)
    found = oracle.brute_isomorphic(source, target, field)
    stored = canonicalizer.bridge_witness(field)
    stored_ok = msc_core.transform(source, stored) == target

    print(f"\n=== GF({field.name}) ===")
    print(f"  Source:  {source}")
    print(f"  Target:  {target}")
    print(f"  Found:   {found.to_rows() if found else 'none'}")
    print(f"  Stored:  {stored.to_rows()} {'✅' if stored_ok else '❌'}")
    return stored_ok and found is not None


def main():
    names = sys.argv[1:] or FIELDS
    ok = all([find_witness(name) for name in names])
    print("\n✅ All bridge witnesses verified" if ok else "\n❌ Bridge witness mismatch")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
