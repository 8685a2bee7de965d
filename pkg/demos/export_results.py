# %% [markdown]
# # Exporting results
#
# Inside boxes can be written as JSON, CSV or a Wavefront OBJ mesh. JSON and
# CSV carry the configuration and read back to identical arrays.

# %%
import tempfile
from pathlib import Path

import numpy as np

from orthoglide import WorkspaceParams, compute_workspace
from orthoglide.export import read_workspace, write_workspace

# %%
params = WorkspaceParams(epsilon=0.2)
result = compute_workspace(params)
out = Path(tempfile.mkdtemp())
for fmt in ("json", "csv", "obj"):
    write_workspace(result, out / f"workspace.{fmt}", fmt, params.to_dict())
    print(fmt, (out / f"workspace.{fmt}").stat().st_size, "bytes")

# %%
a, b = read_workspace(out / "workspace.json"), read_workspace(out / "workspace.csv")
print("identical:", np.array_equal(a.inside_lo, b.inside_lo) and np.array_equal(a.inside_hi, b.inside_hi))
print("volume:", a.inside_volume, "error index:", a.error_index)
