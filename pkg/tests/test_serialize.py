import json
import os
import random
import stat
from pathlib import Path

import pytest

from linkform_fixtures import random_decomposition, representability_fixture, trefoil_form
from linkform.errors import InvalidInput
from linkform.exactnum import RootOfUnity, field
from linkform.forms import classify
from linkform.laurent import LaurentPoly, Mode
from linkform.plinalg import LaurentMatrix
from linkform.serialize import (
    circle_root_orders,
    decomposition_from_json,
    decomposition_to_json,
    dumps,
    element_from_json,
    element_to_json,
    form_from_json,
    form_to_json,
    load_json,
    matrix_from_json,
    matrix_to_json,
    parse_root,
    poly_from_json,
    poly_to_json,
    realize,
    signature_csv,
    write_atomic,
)
from linkform.signatures import sample_grid

GOLDEN = Path(__file__).parent / "golden"
K12 = field(12)


class TestScalars:
    def test_element_round_trip(self):
        x = K12.zeta(5) * 3 + K12("2/7")
        assert element_from_json(element_to_json(x), K12) == x

    def test_shorthand(self):
        assert element_from_json(3, K12) == K12(3)
        assert element_from_json("-1/4", K12) == K12("-1/4")

    def test_lift_from_smaller_field(self):
        i = element_from_json({"N": 4, "coeffs": ["0", "1"]}, K12)
        assert i == K12.i

    @pytest.mark.parametrize("bad", [True, 1.5, "x", {"N": 4}, None])
    def test_bad_elements(self, bad):
        with pytest.raises(InvalidInput):
            element_from_json(bad, K12)

    def test_parse_root(self):
        assert parse_root("3/12") == RootOfUnity(1, 4)
        with pytest.raises(InvalidInput):
            parse_root("0.25")


class TestPolynomialsAndMatrices:
    def test_poly_round_trip(self):
        p = LaurentPoly(K12, {-2: K12.i, 3: K12("5/3")})
        assert poly_from_json(poly_to_json(p), K12) == p

    def test_bad_exponent(self):
        with pytest.raises(InvalidInput):
            poly_from_json({"terms": {"a": 1}}, K12)

    def test_matrix_round_trip(self):
        B = representability_fixture()
        assert matrix_from_json(json.loads(dumps(matrix_to_json(B)))) == B

    def test_conductor_detected_from_determinant(self):
        obj = {"rows": 1, "cols": 1, "entries": [[{"terms": {"-1": 1, "0": -1, "1": 1}}]]}
        A = matrix_from_json(obj)
        assert A.ctx.N == 12

    def test_shape_mismatch(self):
        with pytest.raises(InvalidInput):
            matrix_from_json({"rows": 2, "cols": 1, "entries": [[{"terms": {}}]]})

    def test_circle_root_orders(self):
        p = LaurentPoly(field(4), {1: 1, 0: -1, -1: 1})
        assert circle_root_orders([p]) == [6]


class TestForms:
    def test_frozen_trefoil_reads(self):
        F = form_from_json(load_json(GOLDEN / "trefoil_form.json"))
        assert F.ctx.N == 12 and F.mode is Mode.REAL
        assert classify(F) == classify(trefoil_form())

    def test_form_round_trip(self):
        F = trefoil_form(Mode.COMPLEX)
        G = form_from_json(json.loads(dumps(form_to_json(F))))
        assert classify(G) == classify(F)

    def test_decomposition_round_trip(self):
        rng = random.Random(17)
        for _ in range(20):
            d = random_decomposition(rng, rng.choice([Mode.REAL, Mode.COMPLEX]))
            obj = json.loads(dumps(decomposition_to_json(d)))
            assert decomposition_from_json(obj) == d
            assert classify(form_from_json(obj)) == d
            assert classify(realize(d)) == d

    def test_bad_mode(self):
        with pytest.raises(InvalidInput):
            form_from_json({"mode": "quaternionic", "summands": []})

    def test_bad_eps(self):
        with pytest.raises(InvalidInput):
            decomposition_from_json({"mode": "complex", "forms": [{"type": "E", "n": 1, "k": 0, "eps": 2, "xi": {"num": 1, "den": 4}}]})

    def test_unknown_basic_form(self):
        with pytest.raises(InvalidInput):
            decomposition_from_json({"mode": "complex", "forms": [{"type": "G"}]})


class TestFiles:
    def test_csv_matches_frozen_grid(self):
        d = classify(trefoil_form())
        assert signature_csv(d, sample_grid(360), 360) == (GOLDEN / "trefoil_grid360.csv").read_text()

    def test_dumps_is_deterministic(self):
        assert dumps({"b": 1, "a": [2]}) == '{\n  "a": [\n    2\n  ],\n  "b": 1\n}\n'

    def test_load_errors(self, tmp_path):
        with pytest.raises(InvalidInput):
            load_json(tmp_path / "missing.json")
        bad = tmp_path / "bad.json"
        bad.write_text("{")
        with pytest.raises(InvalidInput):
            load_json(bad)

    def test_atomic_write(self, tmp_path):
        target = tmp_path / "out.txt"
        target.write_text("old")
        write_atomic(str(target), "new\n")
        assert target.read_text() == "new\n"
        assert [p.name for p in tmp_path.iterdir()] == ["out.txt"]
        mask = os.umask(0)
        os.umask(mask)
        assert stat.S_IMODE(target.stat().st_mode) == 0o666 & ~mask

    def test_failed_write_leaves_no_temporary(self, tmp_path):
        with pytest.raises(TypeError):
            write_atomic(str(tmp_path / "x"), b"bytes are rejected")
        assert list(tmp_path.iterdir()) == []
