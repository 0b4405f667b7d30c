import threading


class SingletonMeta(type):
    """
    One shared instance per class, created under a lock so that block
    worker threads never race on first use.
    """

    _instances = {}
    _lock = threading.Lock()

    def __call__(cls, *args, **kwargs):
        with SingletonMeta._lock:
            if cls not in cls._instances:
                cls._instances[cls] = super().__call__(*args, **kwargs)
        return cls._instances[cls]

    def reset(cls) -> None:
        """
        Forget the shared instance; the next call builds a fresh one.
        """
        with SingletonMeta._lock:
            cls._instances.pop(cls, None)
