"""Configuration module for swlag."""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
env_path = Path(".env")
if env_path.exists():
    load_dotenv(env_path)

# Load from ~/.swlag.env if local .env doesn't exist
home_env_path = Path.home() / ".swlag.env"
if not env_path.exists() and home_env_path.exists():
    load_dotenv(home_env_path)

# Construction defaults
DEFAULT_S = float(os.getenv("SWLAG_DEFAULT_S", "0.25"))
DEFAULT_K = int(os.getenv("SWLAG_DEFAULT_K", "60"))
DEFAULT_R_CERT = float(os.getenv("SWLAG_R_CERT", "0.995"))
DEFAULT_J = int(os.getenv("SWLAG_DEFAULT_J", "1"))
DEFAULT_P = float(os.getenv("SWLAG_DEFAULT_P", "1.5"))

# Execution
THREADS = int(os.getenv("SWLAG_THREADS", "1"))
OUT_DIR = os.getenv("SWLAG_OUT_DIR", "swlag-out")
SEED = int(os.getenv("SWLAG_SEED", "20240611"))

# Logging
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
