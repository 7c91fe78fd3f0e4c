import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

# Paths
BASE_DIR = Path(__file__).parent
DATA_DIR = Path(os.getenv("VARNET_DATA_DIR", BASE_DIR / "mnist"))
OUT_DIR = Path(os.getenv("VARNET_OUT_DIR", BASE_DIR / "runs"))

# Logging
LOG_LEVEL = os.getenv("VARNET_LOG_LEVEL", "INFO").upper()

# Artifact
ARTIFACT_VERSION = "1.0"
DEFAULT_SEED = 20220601

# Numerics
JITTER_START = 1e-8
JITTER_MAX = 1e-6
VARIANCE_FLOOR = 1e-8
LEAKY_SLOPE = 0.01

# Methods
MC_SAMPLES = 100               # predictive draws per evaluation
DROPOUT_RATE = 0.1
PRIOR_STD = 1.0
KL_WEIGHT = 1.0                # per-batch penalty is KL_WEIGHT / num_batches
ENSEMBLE_SIZE = 10
INDEX_DIM = 8                  # hypermodel z dimension
SIGMA_INIT_SCALE = 0.1         # sigma sub-layer init relative to mean branch
RHO_INIT_FRACTION = 0.05       # BBB initial std as a fraction of prior_std

# Training
OPTIMIZER = "adam"
LEARNING_RATE = 1e-3
WEIGHT_DECAY = 1e-4
EPOCHS = 100
BATCH_SIZE = 64

# Oracle
NNGP_DEPTH = 2
NNGP_WEIGHT_VARIANCE = 2.0
NNGP_BIAS_VARIANCE = 0.1
HIDDEN_WIDTH = 50

# Benchmark
N_TEST = 100
PROFILES = {
    "desk": {
        "input_dims": [2, 10],
        "data_ratios": [1, 10, 100],
        "noise_stds": [0.01, 0.1, 1.0],
        "seeds": [0, 1, 2, 3, 4],
    },
    "paper": {
        "input_dims": [10, 100, 1000],
        "data_ratios": [1, 10, 100],
        "noise_stds": [0.01, 0.1, 1.0],
        "seeds": list(range(10)),
    },
}
BENCH_METHODS = ["vnn", "bbb", "mcd", "ensemble", "hypermodel"]

# Classification
MNIST_TRAIN_SIZE = 10000
MNIST_TEST_SIZE = 2000
VALIDATION_FRACTION = 0.1
CLASSIFY_METHODS = ["deterministic", *BENCH_METHODS]
CLASSIFY_ARCHITECTURES = ["mlp", "micro"]
CLASSIFY_ACTIVATION = "leaky_relu"   # alpha_N of hidden layers
CLASSIFY_LEARNING_RATES = [3e-3, 1e-3, 3e-4]
CLASSIFY_EPOCHS = 5
CLASSIFY_MC_SAMPLES = 20

# Plots
PLOT_WIDTH_PX = 800
PLOT_HEIGHT_PX = 500
