import os

from dotenv import load_dotenv

# settings are read once at import, so a .env file must be loaded first
load_dotenv()


class Config:
    """
    Configuration settings for the numerics and the reproduction driver.
    """

    # Fock space
    CUTOFF = int(os.environ.get("CUTOFF", "30"))
    TRUNCATION_BUDGET = float(os.environ.get("TRUNCATION_BUDGET", "1e-6"))
    DEVICE_SUM_TOLERANCE = float(os.environ.get("DEVICE_SUM_TOLERANCE", "1e-10"))
    DEVICE_SUM_CAP = int(os.environ.get("DEVICE_SUM_CAP", "60"))
    EIGENVALUE_FLOOR = float(os.environ.get("EIGENVALUE_FLOOR", "1e-14"))
    PSD_TOLERANCE = float(os.environ.get("PSD_TOLERANCE", "1e-8"))
    BLOCK_TOLERANCE = float(os.environ.get("BLOCK_TOLERANCE", "1e-12"))
    BOUND_WEIGHT_CUTOFF = float(os.environ.get("BOUND_WEIGHT_CUTOFF", "1e-8"))

    # Special functions
    HERMITE_MAX_ORDER = int(os.environ.get("HERMITE_MAX_ORDER", "120"))
    HYPERGEOMETRIC_RTOL = float(os.environ.get("HYPERGEOMETRIC_RTOL", "1e-13"))
    HYPERGEOMETRIC_MAX_TERMS = int(
        os.environ.get("HYPERGEOMETRIC_MAX_TERMS", "1000000")
    )

    # Gaussian states
    PURE_STATE_EPSILON = float(os.environ.get("PURE_STATE_EPSILON", "1e-9"))
    SEPARABILITY_TOLERANCE = float(
        os.environ.get("SEPARABILITY_TOLERANCE", "1e-12")
    )

    # Distance minimizer
    MINIMIZER_RESTARTS = int(os.environ.get("MINIMIZER_RESTARTS", "8"))
    MINIMIZER_PERTURBATION = float(os.environ.get("MINIMIZER_PERTURBATION", "0.2"))
    MINIMIZER_XATOL = float(os.environ.get("MINIMIZER_XATOL", "1e-8"))
    MINIMIZER_FATOL = float(os.environ.get("MINIMIZER_FATOL", "1e-10"))
    MINIMIZER_MAX_ITERATIONS = int(
        os.environ.get("MINIMIZER_MAX_ITERATIONS", "4000")
    )
    STRICT_MINIMIZER = os.environ.get("STRICT_MINIMIZER")

    # Brute-force oracle
    ORACLE_MAX_CUTOFF = int(os.environ.get("ORACLE_MAX_CUTOFF", "12"))
    ORACLE_MAX_ENTRIES = int(os.environ.get("ORACLE_MAX_ENTRIES", "20000000"))

    # Sweeps
    SEED = int(os.environ.get("SEED", "20010601"))
    JOBS = int(os.environ.get("JOBS", "1"))
    UNITS = os.environ.get("UNITS", "nats").lower()
    VALID_UNITS = ["nats", "bits"]
    OUTPUT_DIR = os.environ.get("OUTPUT_DIR", "results")
    LOG_LEVEL = os.environ.get("LOG_LEVEL", "INFO").upper()

    def strict_minimizer():
        """
        Checks if a distance minimization that never converged should raise
        instead of returning its best value with a diagnostic flag.

        :return: True if STRICT_MINIMIZER is set to a truthy value.
        """
        return bool_env_var_set("STRICT_MINIMIZER")


def bool_env_var_set(env_var_name):
    """
    Checks if an environment variable is set and is set to a truthy value.

    :param env_var_name: The name of the environment variable.
    :return: True if the environment variable is set and is set to a truthy value.
    """
    env_var = os.environ.get(env_var_name)
    return env_var is not None and env_var.lower() in ["true", "1"]
