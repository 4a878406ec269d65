import os

# pin the settings the suite depends on, whatever the local .env says
os.environ["SEED"] = "20010601"
os.environ["UNITS"] = "nats"
os.environ["JOBS"] = "1"
os.environ["LOG_LEVEL"] = "INFO"
os.environ["STRICT_MINIMIZER"] = "0"
os.environ["MINIMIZER_RESTARTS"] = "8"
os.environ["PURE_STATE_EPSILON"] = "1e-9"
os.environ["TRUNCATION_BUDGET"] = "1e-6"
