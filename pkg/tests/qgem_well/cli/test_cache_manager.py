# Standard Library
from unittest.mock import MagicMock, patch

# Third Party
import numpy as np
import pytest

# First Party
from qgem_well.cli.cache_manager import JTableCache
from qgem_well.simulation.quadrature import build_table


@pytest.fixture
def builder():
    return MagicMock(side_effect=build_table)


def test_key_builder():
    assert JTableCache.key_builder(0.02, 1e-10) == "jtable_d0.020000000000_a1.000000e-10_v1.0.bin"
    assert JTableCache.key_builder(0.1 + 0.2, 1e-10) == JTableCache.key_builder(0.3, 1e-10)


def test_miss_then_hit(tmp_path, builder):
    cache = JTableCache(tmp_path, builder=builder)
    first = cache(0.5, 8, 1e-10)
    second = cache(0.5, 8, 1e-10)
    assert builder.call_count == 1
    assert (cache.misses, cache.hits) == (1, 1)
    assert np.array_equal(first.values, second.values)
    assert cache.path_for(0.5, 1e-10).is_file()


def test_hit_survives_a_new_cache_instance(tmp_path, builder):
    JTableCache(tmp_path, builder=builder)(0.5, 8, 1e-10)
    again = JTableCache(tmp_path, builder=builder)
    again(0.5, 8, 1e-10)
    assert builder.call_count == 1
    assert again.hits == 1


def test_smaller_request_is_served_by_truncation(tmp_path, builder):
    cache = JTableCache(tmp_path, builder=builder)
    large = cache(0.5, 16, 1e-10)
    small = cache(0.5, 6, 1e-10)
    assert builder.call_count == 1
    assert small.pmax == 6
    assert np.array_equal(small.values, large.values[:7, :7])


def test_larger_request_rebuilds_and_replaces(tmp_path, builder):
    cache = JTableCache(tmp_path, builder=builder)
    cache(0.5, 6, 1e-10)
    cache(0.5, 16, 1e-10)
    assert builder.call_count == 2
    assert cache.lookup(0.5, 16, 1e-10).pmax == 16


def test_accuracy_and_delta_are_part_of_the_key(tmp_path, builder):
    cache = JTableCache(tmp_path, builder=builder)
    cache(0.5, 6, 1e-10)
    cache(0.5, 6, 1e-8)
    cache(0.25, 6, 1e-10)
    assert builder.call_count == 3
    assert cache.lookup(0.5, 6, 1e-9) is None


def test_builder_receives_worker_count(tmp_path, builder):
    JTableCache(tmp_path, workers=3, builder=builder)(0.5, 6, 1e-10)
    builder.assert_called_once_with(0.5, 6, 1e-10, workers=3)


@patch("logging.Logger.warning")
def test_corrupt_file_is_rebuilt(warning_logger, tmp_path, builder):
    cache = JTableCache(tmp_path, builder=builder)
    path = cache.path_for(0.5, 1e-10)
    path.write_bytes(b"QGEMJT 1.0 0.5 8 1e-10\n\x00\x01\x02")
    table = cache(0.5, 8, 1e-10)
    warning_logger.assert_called_once()
    assert builder.call_count == 1
    assert path.read_bytes() == table.to_bytes()


def test_table_with_another_version_is_rebuilt(tmp_path, builder):
    cache = JTableCache(tmp_path, builder=builder)
    stale = build_table(0.5, 8)
    payload = stale.to_bytes().replace(b"QGEMJT 1.0 ", b"QGEMJT 0.9 ", 1)
    cache.path_for(0.5, 1e-10).write_bytes(payload)
    cache(0.5, 8, 1e-10)
    assert builder.call_count == 1


def test_store_leaves_no_temporary_files(tmp_path):
    cache = JTableCache(tmp_path / "nested" / "cache")
    path = cache.store(build_table(0.5, 6))
    assert path.parent.is_dir()
    assert [child.name for child in path.parent.iterdir()] == [path.name]


def test_default_builder_is_resolved_at_construction(tmp_path):
    with patch("qgem_well.cli.cache_manager.build_table", side_effect=build_table) as patched:
        cache = JTableCache(tmp_path)
    cache(0.5, 6, 1e-10)
    patched.assert_called_once_with(0.5, 6, 1e-10, workers=1)
