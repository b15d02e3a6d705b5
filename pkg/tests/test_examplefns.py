import pytest

from dagforge import RandomStream
from dagforge.errors import DomainError
from dagforge.examplefns import (
    IMAGE_SIZE,
    assign_protocol,
    complement_binomial,
    create_airr,
    draw_image,
    encode_kmers,
    sigmoid_binomial,
)


def stream(i=0):
    return RandomStream(0, i, 0)


def test_complement_binomial_endpoints():
    for i in range(20):
        assert complement_binomial(stream(i), 1.0) == 0
        assert complement_binomial(stream(i), 0.0) == 1


def test_sigmoid_binomial_labels():
    out = {sigmoid_binomial(stream(i), 1, 0, "H") for i in range(50)}
    assert out <= {0, 1}
    with pytest.raises(DomainError):
        sigmoid_binomial(stream(), 1, 0, "Q")
    with pytest.raises(DomainError):
        sigmoid_binomial(stream(), 2, 0, "H")


def test_draw_image_blank_and_overlays():
    blank = draw_image(0, 0, 0, 0)
    assert blank.shape == (IMAGE_SIZE, IMAGE_SIZE)
    assert set(blank.data) == {0.0}

    h_only = draw_image(1, 0, 0, 0)
    lit = {divmod(i, IMAGE_SIZE) for i, x in enumerate(h_only.data) if x != 0.0}
    assert lit == {(r, c) for r in range(7, 9) for c in range(1, 15)}
    assert all(x in (0.0, 1.0) for x in h_only.data)

    full = draw_image(1, 1, 1, 1)
    assert {0.0, 0.5, 0.75, 1.0} == set(full.data)


def test_draw_image_is_deterministic():
    assert draw_image(1, 0, 1, 0) == draw_image(1, 0, 1, 0)
    with pytest.raises(DomainError):
        draw_image(2, 0, 0, 0)


def test_assign_protocol_values_and_bias():
    outs_diseased = [assign_protocol(stream(i), 1) for i in range(2000)]
    outs_healthy = [assign_protocol(stream(i), 0) for i in range(2000)]
    assert set(outs_diseased) <= {"A", "B"}
    b_diseased = outs_diseased.count("B") / 2000
    b_healthy = outs_healthy.count("B") / 2000
    assert abs(b_diseased - 0.7) < 0.05
    assert abs(b_healthy - 0.3) < 0.05


def test_create_airr_shape_and_protocol_stamp():
    seqs = create_airr(stream(), 1, 40, "B")
    assert len(seqs) == 8
    assert all(len(s) == 16 for s in seqs)
    assert all(set(s) <= set("ACGT") for s in seqs)
    assert all(s.startswith("TT") for s in seqs)
    seqs_a = create_airr(stream(), 0, 40, "A")
    assert not all(s.startswith("TT") for s in seqs_a)
    with pytest.raises(DomainError):
        create_airr(stream(), 0, 40, "C")


def test_disease_motif_enrichment():
    diseased = [create_airr(stream(i), 1, 20, "A") for i in range(100)]
    healthy = [create_airr(stream(i), 0, 20, "A") for i in range(100)]
    count = lambda reps: sum(s.count("GGGG") for rep in reps for s in rep)
    assert count(diseased) > 2 * count(healthy)


def test_encode_kmers_matches_library_vector():
    vec = encode_kmers(["ACGT", "AAAA"])
    assert len(vec) == 16
    assert sum(vec) == 2 * 3  # three overlapping 2-mers per length-4 sequence
    assert vec[0] == 3  # "AA" appears three times in "AAAA"
