"""Write the JSON schemas of the CLI ``--json`` reports to src/nquasi/schemas."""
from __future__ import annotations

import json
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "nquasi" / "schemas"

INT = {"type": "integer"}
NAT = {"type": "integer", "minimum": 0}
POS = {"type": "integer", "minimum": 1}
BOOL = {"type": "boolean"}
STR = {"type": "string"}


def nullable(s):
    return {"anyOf": [s, {"type": "null"}]}


def obj(props, required=None, extra=False):
    return {
        "type": "object",
        "properties": props,
        "required": sorted(props) if required is None else required,
        "additionalProperties": extra,
    }


def arr(items, **kw):
    return {"type": "array", "items": items, **kw}


DEFS = {
    "table": obj({"n": POS, "q": POS, "values": arr(NAT)}),
    "perm": arr(NAT),
    "isotopy": arr({"$ref": "#/$defs/perm"}, minItems=2),
    "retract_spec": obj({
        "fixings": {"type": "object", "patternProperties": {"^[0-9]+$": NAT}, "additionalProperties": False},
        "solve_for": NAT,
    }),
    "tree": {
        "oneOf": [
            obj({"kind": {"const": "leaf"}, "irreducible": BOOL, "table": {"$ref": "#/$defs/table"}}),
            obj({
                "kind": {"const": "node"},
                "m": {"type": "integer", "minimum": 2},
                "sigma": arr(POS, minItems=3),
                "outer": {"$ref": "#/$defs/tree"},
                "inner": {"$ref": "#/$defs/tree"},
            }),
        ]
    },
    "pair": obj({"coords": arr(NAT, minItems=2, maxItems=2), "mu": {"$ref": "#/$defs/perm"},
                 "nu": {"$ref": "#/$defs/perm"}}),
    "chain": obj({"b": POS, "a_seq": arr(POS), "d_seq": arr(POS), "status": STR, "events": arr(STR)}),
    "hypothesis_check": obj({"mode": {"enum": ["exhaustive", "sampled"]}, "retracts_checked": NAT}),
}

TABLE = {"$ref": "#/$defs/table"}
TREE = {"$ref": "#/$defs/tree"}
SPEC = {"$ref": "#/$defs/retract_spec"}
ISO = {"$ref": "#/$defs/isotopy"}

ORIENTATION = {
    "type": "object",
    "properties": {
        "outer": POS, "pair": arr(POS, minItems=2, maxItems=2), "holds": BOOL,
        "outer_op": TABLE, "inner_op": TABLE, "star_equals_outer": BOOL,
        "outer_associative": BOOL, "outer_commutative": BOOL,
    },
    "required": ["outer", "pair", "holds"],
    "additionalProperties": False,
}

LEMMA_COMMON = {
    "method": {"enum": ["lemma1", "lemma2"]},
    "reducible": BOOL,
    "status": {"enum": ["decomposed", "hypothesis-failed", "unsupported-frame"]},
    "hypothesis_check": {"$ref": "#/$defs/hypothesis_check"},
    "witness": {},
    "tree": nullable(TREE),
}

SCHEMAS = {
    "table": TABLE,
    "tree": TREE,
    "validate": obj({"valid": BOOL, "n": POS, "q": POS, "coordinate": nullable(POS),
                     "line": nullable(arr(NAT)), "message": STR}),
    "normalize": obj({"table": TABLE, "isotopy": ISO}),
    "retract": obj({"spec": SPEC, "table": TABLE}),
    "isotopy": obj({"table": TABLE}),
    "phi": obj({"normalization": ISO, "table": TABLE, "equals_input": BOOL}),
    "decompose": {
        "oneOf": [
            obj({"method": {"const": "brute"}, "reducible": BOOL, "complete": BOOL, "tree": TREE}),
            obj({**LEMMA_COMMON}, required=["method", "reducible", "status", "tree"], extra=True),
        ]
    },
    "lemma1": obj({k: v for k, v in LEMMA_COMMON.items() if k not in ("method", "reducible")}),
    "lemma2": obj({
        **{k: v for k, v in LEMMA_COMMON.items() if k not in ("method", "reducible")},
        "message": STR,
        "frame": nullable(SPEC),
        "order": arr(POS),
        "branch": {"enum": ["", "same-slot", "different-slots"]},
        "i_b": arr(NAT), "h_b": arr(TABLE), "j_a": arr(NAT), "g_a": arr(TABLE),
    }),
    "spectrum": obj({
        "kappa": {"type": "integer", "minimum": 2},
        "retract_class": {"enum": ["principal", "all"]},
        "witness": nullable(arr(SPEC, minItems=1, maxItems=1)),
        "census": {"type": "object", "additionalProperties": obj({"reducible": NAT, "irreducible": NAT})},
    }),
    "triple": obj({"normalization": ISO, "indices": arr(POS, minItems=3, maxItems=3),
                   "forms": arr(ORIENTATION, minItems=3, maxItems=3),
                   "brackets": arr(BOOL, minItems=3, maxItems=3)},
                  required=["indices", "forms", "brackets"]),
    "quad": obj({"normalization": ISO, "indices": arr(POS, minItems=4, maxItems=4),
                 "nested": arr(arr({}, minItems=3, maxItems=3)),
                 "paired": arr(arr(arr(POS, minItems=2, maxItems=2), minItems=2, maxItems=2))},
                required=["indices", "nested", "paired"]),
    "inner_pair": obj({"normalization": ISO, "pair": arr(POS, minItems=2, maxItems=2), "op": TABLE,
                       "chain": {"$ref": "#/$defs/chain"}, "diagnostics": arr({"$ref": "#/$defs/chain"})},
                      required=["pair", "op", "chain", "diagnostics"]),
    "prop24": obj({"status": {"enum": ["PASS", "HYPOTHESIS_FAILED", "FAIL"]}, "failed": arr(STR)}),
    "aut": obj({
        "coords": arr(NAT, minItems=2, maxItems=2),
        "prime_order": BOOL,
        "pairs": arr({"$ref": "#/$defs/pair"}),
        "cycle_type_violations": arr({"$ref": "#/$defs/pair"}),
        "reduction": nullable(obj({
            "pair": {"$ref": "#/$defs/pair"}, "alpha": TABLE, "beta": TABLE,
            "gamma": {"$ref": "#/$defs/perm"}, "rho": arr({"$ref": "#/$defs/perm"}),
            "tau": arr({"$ref": "#/$defs/perm"}), "tree": TREE,
        })),
    }),
    "theorem": obj({
        "status": {"enum": ["PASS", "FAIL"]},
        "n": POS, "q": POS, "reducible": BOOL,
        "general_claim": {"enum": ["PASS", "FAIL", "VACUOUS", "OPEN", "NOT_APPLICABLE"]},
        "prime_claim": {"enum": ["PASS", "FAIL", "VACUOUS", "OPEN", "NOT_APPLICABLE"]},
        "witness_n_minus_1": nullable(SPEC),
        "witness_n_minus_2": nullable(SPEC),
        "notes": arr(STR),
    }),
    "gen": obj({"table": TABLE, "tree": TREE}, required=["table"]),
}


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name, body in SCHEMAS.items():
        doc = {"$schema": "https://json-schema.org/draft/2020-12/schema", "title": f"nquasi {name}",
               **body, "$defs": DEFS}
        (OUT / f"{name}.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
