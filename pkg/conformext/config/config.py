# conformext/config/config.py

import os
from pydantic import BaseSettings


class Settings(BaseSettings):
    """Runtime defaults read from environment variables (and `.env`)"""

    # Logging
    log_level: str = os.getenv("CONFORMEXT_LOG_LEVEL", "INFO")

    # Output location
    out_dir: str = os.getenv("CONFORMEXT_OUT_DIR", "results")

    # Grid discretization
    default_pitch: float = float(os.getenv("CONFORMEXT_PITCH", "0.02"))

    # Schwarz-Christoffel solver
    sc_tolerance: float = float(os.getenv("CONFORMEXT_SC_TOL", "1e-10"))
    sc_max_iterations: int = int(os.getenv("CONFORMEXT_SC_MAX_ITER", "60"))
    quadrature_nodes: int = int(os.getenv("CONFORMEXT_QUAD_NODES", "24"))

    # Tail classifier
    tail_window_budget: int = int(os.getenv("CONFORMEXT_TAIL_WINDOWS", "200"))
    divergence_threshold: float = float(os.getenv("CONFORMEXT_DIVERGENCE_THRESHOLD", "50"))

    # Area integrals
    angular_nodes: int = int(os.getenv("CONFORMEXT_ANGULAR_NODES", "256"))
    radial_levels: int = int(os.getenv("CONFORMEXT_RADIAL_LEVELS", "20"))

    # Crosscut families
    crosscut_samples: int = int(os.getenv("CONFORMEXT_CROSSCUT_SAMPLES", "33"))

    # Sampled audits
    seed: int = int(os.getenv("CONFORMEXT_SEED", "0"))

    class Config:
        env_file = ".env"
        case_sensitive = False
        extra = "ignore"

    def get_out_dir(self) -> str:
        return self.out_dir


# Global configuration instance
settings = Settings()
