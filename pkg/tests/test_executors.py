import threading

from igo_toolkit.contracts.ports.executor import SweepExecutorPort
from igo_toolkit.toolkit.executors import SequentialExecutor, ThreadPoolSweepExecutor, make_executor


class TestExecutors:

    def test_factory(self):
        assert isinstance(make_executor(1), SequentialExecutor)
        pool = make_executor(3)
        try:
            assert isinstance(pool, ThreadPoolSweepExecutor)
            assert isinstance(pool, SweepExecutorPort)
        finally:
            pool.close()

    def test_order_is_preserved(self):
        items = list(range(200))
        with ThreadPoolSweepExecutor(max_workers=8) as pool:
            assert pool.map(lambda v: v * v, items) == [v * v for v in items]
        with SequentialExecutor() as seq:
            assert seq.map(lambda v: v * v, items) == [v * v for v in items]

    def test_pool_uses_worker_threads(self):
        names = set()

        def record(_):
            names.add(threading.current_thread().name)
            return None

        with ThreadPoolSweepExecutor(max_workers=2) as pool:
            pool.map(record, range(20))
        assert all(n.startswith("igo-sweep") for n in names)
