import pytest

from evdmm import CapacityError, InputError, Partition, parse_partition


def test_parse_indices():
    part = parse_partition("1,2|3")
    assert part.blocks == ((0, 1), (2,))
    assert part.dimension == 3
    assert part.p == 2
    assert part.format() == "1,2|3"


def test_parse_names():
    part = parse_partition("CAC, FTSE | DJ", column_names=["CAC", "FTSE", "DJ"])
    assert part.blocks == ((0, 1), (2,))
    assert part.format(["CAC", "FTSE", "DJ"]) == "CAC,FTSE|DJ"


@pytest.mark.parametrize("text", ["1,a|2", "", "1,,2", "1|", "0|1"])
def test_parse_rejects(text):
    with pytest.raises(InputError):
        parse_partition(text, column_names=["a", "b", "c"])


def test_names_need_columns():
    with pytest.raises(InputError):
        parse_partition("a|b")


@pytest.mark.parametrize("blocks,d", [([[0, 1], [1]], 2), ([[0], [2]], 3), ([[0], []], 1), ([], 1)])
def test_invalid_partitions(blocks, d):
    with pytest.raises(InputError):
        Partition(blocks, d)


def test_union_and_masks():
    part = Partition([[2], [0, 3], [1]])
    assert part.full_mask == 0b111
    assert part.union(0b101) == (1, 2)
    assert part.to_list() == [[3], [1, 4], [2]]


def test_block_cap(monkeypatch):
    with pytest.raises(CapacityError):
        Partition.singletons(21)
    monkeypatch.setenv("EVDMM_MAX_P", "22")
    assert Partition.singletons(21).p == 21
