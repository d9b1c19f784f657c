import os
from dotenv import load_dotenv
load_dotenv()

OMEGASURF_THREADS = int(os.getenv('OMEGASURF_THREADS', '0') or 0)
OMEGASURF_LOG_LEVEL = str(os.getenv('OMEGASURF_LOG_LEVEL', 'INFO'))
OMEGASURF_LOG_FILE = os.getenv('OMEGASURF_LOG_FILE')

# tolerances, relative to the bounding-box diagonal of the scene
EPS_DEGENERATE_REL = 1e-12
EPS_BOUNDARY_REL = 1e-9
CORNER_ANGLE_DEG = 1.0
UMBILIC_REL_TOL = 1e-8
SINGULAR_STENCIL_COND = 1e12

# elements of the (points x segments) work array per chunk
EVAL_CHUNK_BUDGET = int(os.getenv('OMEGASURF_CHUNK_BUDGET', '262144') or 262144)

CSV_FLOAT_FORMAT = ".17g"
MESH_STRETCH_LIMIT = 5.0
