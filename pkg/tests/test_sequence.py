import numpy as np
import pytest

from quartetfold.sequence import (
    Base,
    SequenceError,
    is_valid_pair,
    parse_fasta,
    parse_sequence,
    random_sequence,
)


def test_parse_plain():
    seq = parse_sequence("GGGAAACCC")
    assert str(seq) == "GGGAAACCC"
    assert len(seq) == 9
    assert seq.base(1) == Base.G
    assert seq.base(9) == Base.C


def test_parse_normalizes_case_and_t():
    assert str(parse_sequence("ggGAaUt")) == "GGGAAUU"


def test_parse_reports_offending_position():
    with pytest.raises(SequenceError, match="position 3"):
        parse_sequence("GGXACC")
    with pytest.raises(SequenceError):
        parse_sequence("   ")


def test_parse_round_trip_random():
    rng = np.random.default_rng(7)
    for _ in range(50):
        seq = random_sequence(int(rng.integers(1, 40)), rng)
        assert parse_sequence(str(seq)) == seq


def test_fasta_headers_ignored_and_lines_joined():
    text = "> some header\nGGGAAA\nCCC\n"
    assert str(parse_fasta(text)) == "GGGAAACCC"
    assert str(parse_fasta("GGG\nAAA")) == "GGGAAA"


def test_base_index_bounds():
    seq = parse_sequence("GAC")
    with pytest.raises(IndexError):
        seq.base(0)
    with pytest.raises(IndexError):
        seq.base(4)


def test_valid_pairs_exactly_six_and_symmetric():
    bases = list(Base)
    valid = [(a, b) for a in bases for b in bases if is_valid_pair(a, b)]
    assert len(valid) == 6
    assert set(valid) == {
        (Base.A, Base.U), (Base.U, Base.A),
        (Base.C, Base.G), (Base.G, Base.C),
        (Base.G, Base.U), (Base.U, Base.G),
    }
    for a in bases:
        for b in bases:
            assert is_valid_pair(a, b) == is_valid_pair(b, a)


def test_valid_pair_examples():
    assert is_valid_pair(Base.G, Base.C)
    assert is_valid_pair(Base.G, Base.U)  # wobble
    assert not is_valid_pair(Base.A, Base.G)


def test_random_sequence_deterministic_and_sized():
    a = random_sequence(5, np.random.default_rng(42))
    b = random_sequence(5, np.random.default_rng(42))
    assert a == b
    assert len(random_sequence(60, np.random.default_rng(0))) == 60
    with pytest.raises(ValueError):
        random_sequence(0, np.random.default_rng(0))


def test_random_sequence_base_frequencies():
    rng = np.random.default_rng(123)
    counts = {b: 0 for b in Base}
    draws, length = 10_000, 60
    for _ in range(draws):
        for b in random_sequence(length, rng).bases:
            counts[b] += 1
    total = draws * length
    for b in Base:
        assert abs(counts[b] / total - 0.25) < 0.02
