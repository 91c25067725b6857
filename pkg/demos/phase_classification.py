"""Learn the phase from C_z(1,2,t) on the reduced grid and scan the paths.

Takes about 30 s on one core.

    python demos/phase_classification.py
"""
import numpy as np

from elmlab.phaseml.classify import TrainConfig, crossing, evaluate, train_classifier
from elmlab.phaseml.cnn import NetworkConfig
from elmlab.phaseml.dataset import PATH2_ALPHA, GridSpec, generate_dataset, split_dataset

grid = GridSpec.reduced(0.05)
data = split_dataset(generate_dataset(grid, "cz"), seed=0)
print({tag: int(np.sum(data.split == tag)) for tag in ("train", "test", "path-test")})

model = train_classifier(data, NetworkConfig(), TrainConfig(epochs=50, final_lr_fraction=0.01))
print("loss every 10 epochs:", [round(e["loss"], 4) for e in model.log[::10]])
for tag in ("train", "test", "path-test"):
    m = evaluate(model, data, tag)
    print(f"{tag:9s} accuracy {m['accuracy']:.4f}  confusion {m['confusion']}")

# P_BS along paths 1 and 2 on a finer lambda grid.
lams = np.round(np.arange(101) * 0.01, 12)
for name, alpha, lc in (("path 1", 0.0, 0.2), ("path 2", PATH2_ALPHA, 2 / 11)):
    pts = np.column_stack([lams, np.full_like(lams, alpha)])
    pbs = model.predict_pbs(generate_dataset(grid, points=pts).features)
    print(f"{name}: P_BS = 0.5 at lambda {crossing(lams, pbs):.3f} (mean field {lc:.3f})")
