"""Reading MNIST-style IDX files and encoding images as states.

Images are zero-padded from 28x28 to 32x32, flattened and normalized into
the amplitudes of a 10-qubit state. Fewer qubits average pixel blocks first.
"""

import tempfile
from pathlib import Path

import numpy as np

from idblock.data import ImageSet, load_mnist, preprocess_example, to_idx

rng = np.random.default_rng(0)
images = ImageSet(rng.integers(0, 256, (4, 28, 28), dtype=np.uint8))
labels = np.array([3, 8, 0, 5], dtype=np.uint8)

with tempfile.TemporaryDirectory() as tmp:
    img_path, lab_path = Path(tmp, "images.idx3"), Path(tmp, "labels.idx1")
    img_path.write_bytes(to_idx(images))
    lab_path.write_bytes(to_idx(labels))
    loaded = load_mnist(img_path, lab_path)

print("round trip exact:", np.array_equal(loaded.pixels, images.pixels))
for n in (10, 6):
    ex = preprocess_example(loaded.pixels[0], loaded.labels[0], n_qubits=n)
    print(f"{n} qubits: state length {ex.state.size}, norm {np.linalg.norm(ex.state):.12f}, "
          f"label {ex.label} (digit {loaded.labels[0]})")
