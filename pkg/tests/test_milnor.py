import random

import pytest

from conftest import EXAMPLE_P_PRIME, HOPF, random_based
from freegroup_oracle import eta_words, oracle_table, signed_under_count
from welded_milnor.gauss import parse_based
from welded_milnor.milnor import (
    MuBar,
    delta,
    format_sequence,
    is_non_repeated,
    longitude_series,
    longitude_words,
    mu,
    mu_bar,
    mu_bar_table,
    mu_reduced,
    mu_table,
    parse_sequence,
    sequences,
    sv_equivalent,
    table_records,
)
from welded_milnor.series import magnus_word


def nonzero(table):
    return {s: v for s, v in table.items() if v}


def test_longitudes_at_both_base_points(example):
    d, p = example
    assert longitude_words(d, p) == ["a21", "a21^-1 a11 a23", "a21^-1 a22"]
    assert longitude_words(d, EXAMPLE_P_PRIME) == ["a22", "a21^-1 a22 a11", "a22^-1 a21"]


def test_eta3_longitude_series(example):
    d, p = example
    assert [str(s) for s in longitude_series(d, p, 3, 2)] == ["1 + X2", "1 + X1", "1 - X1X2 + X2X1"]
    assert [str(s) for s in longitude_series(d, EXAMPLE_P_PRIME, 3, 2)] == ["1 + X2", "1 + X1", "1"]


def test_third_longitude_is_a_commutator(example):
    d, p = example
    word = eta_words(d, p, 3)[2]
    assert word == [-2, -1, 2, 1]
    assert magnus_word(word, 3, 2) == longitude_series(d, p, 3, 2)[2]
    assert eta_words(d, EXAMPLE_P_PRIME, 3)[2] == []


def test_mu_table_example(example):
    d, p = example
    assert nonzero(mu_table(d, p, 3)) == {(1, 2): 1, (2, 1): 1, (1, 2, 3): -1, (2, 1, 3): 1}
    assert nonzero(mu_table(d, EXAMPLE_P_PRIME, 3)) == {(1, 2): 1, (2, 1): 1}
    assert mu(d, p, (1, 2, 3)) == -1
    assert mu(d, p, [2, 1, 3]) == 1


def test_length_four_layer_example(example):
    # frozen from the free-group oracle
    d, p = example
    four = {s: v for s, v in nonzero(mu_table(d, p, 4)).items() if len(s) == 4}
    assert four == {(1, 1, 2, 3): 1, (1, 2, 1, 3): -1, (2, 1, 2, 3): 1, (2, 2, 1, 3): -1}


def test_delta_example(example):
    d, p = example
    t = mu_table(d, p, 3)
    assert delta(t, (1, 2)) == 0
    assert delta(t, (1, 2, 3)) == 1
    assert delta(t, (1, 3, 2)) == 1
    assert delta(t, (1, 1, 2)) == 1
    assert delta(t, (3, 3, 3)) == 0


def test_mu_bar_example(example):
    d, p = example
    a, b = mu_bar(d, p, (1, 2, 3)), mu_bar(d, EXAMPLE_P_PRIME, (1, 2, 3))
    assert (a.mu, a.delta, a.residue) == (-1, 1, 0)
    assert (b.mu, b.delta, b.residue) == (0, 1, 0)
    assert a == b


def test_mu_bar_residue_rules():
    assert MuBar.of((1, 2), -3, 0).residue == -3
    assert MuBar.of((1, 2, 3), -3, 2).residue == 1
    assert MuBar.of((1, 2, 3), 5, 5) == MuBar.of((1, 2, 3), 0, 5)
    assert MuBar.of((1, 2, 3), 5, 5) != MuBar.of((1, 3, 2), 0, 5)


def test_records_schema(example):
    d, p = example
    recs = table_records(mu_table(d, p, 3), d.n)
    assert all(set(r) == {"sequence", "mu", "delta", "mu_bar"} for r in recs)
    assert len(recs) == 9 + 27
    assert recs[0] == {"sequence": "11", "mu": 0, "delta": 0, "mu_bar": 0}
    nr = table_records(mu_table(d, p, 3), d.n, non_repeated=True)
    assert [r["sequence"] for r in nr if len(r["sequence"]) == 3] == ["123", "132", "213", "231", "312", "321"]


def test_sequence_formatting():
    assert format_sequence((1, 2, 3)) == "123"
    assert format_sequence((1, 10), 10) == "1,10"
    assert parse_sequence("1,10") == (1, 10)
    assert parse_sequence("213") == (2, 1, 3)
    assert len(sequences(2, 3)) == 4 + 8


def test_bad_sequences(example):
    d, p = example
    with pytest.raises(ValueError):
        mu(d, p, (1,))
    with pytest.raises(ValueError):
        mu(d, p, (1, 4))
    with pytest.raises(ValueError):
        mu(d, p, (1, 2, 3), q=2)
    with pytest.raises(ValueError):
        mu_reduced(d, p, (1, 1, 2))


def test_stable_in_q():
    rng = random.Random(11)
    for _ in range(30):
        d, p = random_based(rng, n_min=2)
        for seq in [(1, 2), (2, 1, 1), (1, 2, 2)] + ([(1, 2, 3)] if d.n > 2 else []):
            ref = mu(d, p, seq)
            assert all(mu(d, p, seq, q=q) == ref for q in range(len(seq) + 1, len(seq) + 3))


def test_linking_numbers():
    rng = random.Random(4)
    for _ in range(100):
        d, p = random_based(rng, n_min=2)
        t = mu_table(d, p, 2)
        for i in range(1, d.n + 1):
            for j in range(1, d.n + 1):
                if i != j:
                    assert t[(j, i)] == signed_under_count(d, i, j)


def test_matches_free_group_oracle():
    rng = random.Random(9)
    for _ in range(60):
        d, p = random_based(rng)
        assert mu_table(d, p, 4) == oracle_table(d, p, 4)


def test_killed_generator_matches_substitution():
    rng = random.Random(2)
    for _ in range(40):
        d, p = random_based(rng, n_min=2)
        plain = longitude_series(d, p, 3, 2)
        for k in range(1, d.n + 1):
            killed = longitude_series(d, p, 3, 2, killed=k)
            assert killed == [s.subst_zero(k) for s in plain]


def test_reduced_agrees_on_non_repeated():
    rng = random.Random(3)
    for _ in range(40):
        d, p = random_based(rng, n_min=2)
        table = mu_table(d, p, 3)
        for seq, v in table.items():
            if is_non_repeated(seq):
                assert mu_reduced(d, p, seq) == v


def test_mu_bar_table_covers_table(example):
    d, p = example
    t = mu_table(d, p, 3)
    bars = mu_bar_table(t)
    assert set(bars) == set(t)
    assert all(b.mu == t[s] for s, b in bars.items())


def test_sv_equivalence_examples(example, hopf):
    d, p = example
    assert sv_equivalent(d, p, d, EXAMPLE_P_PRIME) == (False, (1, 2, 3))
    assert sv_equivalent(d, p, d, p) == (True, None)
    h, hp = hopf
    kinked, kp = parse_based("O1+ U3- O3- U2+ ; U1+ O2+")
    assert sv_equivalent(h, hp, kinked, kp) == (True, None)
    unlink, up = parse_based("- ; -")
    assert sv_equivalent(h, hp, unlink, up) == (False, (1, 2))
    with pytest.raises(ValueError):
        sv_equivalent(h, hp, d, p)


def test_hopf_values(hopf):
    d, p = hopf
    assert parse_based(HOPF)[0] == d
    # repeated entries frozen from the free-group oracle; their indeterminacy is 1
    table = mu_table(d, p, 3)
    assert nonzero(table) == {(1, 2): 1, (2, 1): 1, (1, 2, 1): -1, (2, 1, 1): 1}
    assert delta(table, (1, 2, 1)) == 1
