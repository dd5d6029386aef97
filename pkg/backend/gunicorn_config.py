# gunicorn_config.py
# Post-fork hook to build the commonly used fields in each worker

def post_fork(server, worker):
    """Called after a worker has been forked."""
    try:
        import config
        from services.fields import field_from_name
        for name in config.WARM_FIELDS:
            field_from_name(name)
        print(f"✅ Worker {worker.pid}: fields warmed ({', '.join(config.WARM_FIELDS)})")
    except Exception as e:
        print(f"⚠️  Worker {worker.pid}: field warm-up error: {e}")
        # Don't crash worker - fields are built on first use
