import threading
import pytest
from koszulkit.helpers import async_run_cells, binomial, parse_int_list, parse_name_list, run_cells

@pytest.mark.asyncio
async def test_async_run_cells_keeps_key_order():
    result = await async_run_cells(lambda key: key * key, [3, 1, 2], threads=3)
    assert list(result) == [3, 1, 2]
    assert result == {3: 9, 1: 1, 2: 4}

@pytest.mark.asyncio
async def test_async_run_cells_uses_worker_threads():
    names = await async_run_cells(lambda key: threading.current_thread().name, range(4), threads=2)
    assert threading.current_thread().name not in names.values()

def test_run_cells_inline():
    calls = []

    def record(key):
        calls.append(key)
        return -key

    assert run_cells(record, [2, 0, 1]) == {2: -2, 0: 0, 1: -1}
    assert calls == [2, 0, 1]

def test_run_cells_parallel_matches_inline():
    keys = [(p, q) for p in range(3) for q in range(3)]
    assert run_cells(sum, keys, threads=4) == run_cells(sum, keys)

def test_binomial():
    assert binomial(5, 2) == 10
    assert binomial(3, 0) == 1
    assert binomial(2, 3) == 0
    assert binomial(4, -1) == 0
    assert binomial(-1, 0) == 0

def test_parse_lists():
    assert parse_name_list('x, y,z') == ['x', 'y', 'z']
    assert parse_name_list('a b') == ['a', 'b']
    assert parse_int_list('1, 2 3') == [1, 2, 3]
    with pytest.raises(ValueError):
        parse_int_list('1,two')

@pytest.mark.asyncio
async def test_run_cells_inside_running_loop():
    keys = [(p, q) for p in range(3) for q in range(2)]
    result = run_cells(sum, keys, threads=3)
    assert list(result) == keys
    assert result[(2, 1)] == 3
