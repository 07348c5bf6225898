"""MNIST IDX parsing, amplitude encoding, a synthetic fallback dataset and
CSV/manifest writers."""

import csv
import struct
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .ansatz import as_rng

IDX_IMAGES = 0x00000803
IDX_LABELS = 0x00000801
MNIST_SIDE = 28
PAD = 2


class IdxFormatError(ValueError):
    pass


@dataclass
class ImageSet:
    pixels: np.ndarray  # (count, height, width) uint8
    labels: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.labels is not None and len(self.labels) != len(self.pixels):
            raise ValueError("labels length must equal image count")

    @property
    def count(self):
        return self.pixels.shape[0]

    @property
    def height(self):
        return self.pixels.shape[1]

    @property
    def width(self):
        return self.pixels.shape[2]


@dataclass
class EncodedExample:
    state: np.ndarray
    label: int  # 1 = even digit, 0 = odd


def parse_idx(data: bytes):
    """Decode an IDX byte stream.

    Image files (magic ``0x00000803``) give an :class:`ImageSet`; label files
    (``0x00000801``) give a ``uint8`` vector.
    """
    if len(data) < 4:
        raise IdxFormatError("stream too short for an IDX header")
    (magic,) = struct.unpack(">I", data[:4])
    if magic == IDX_IMAGES:
        ndim = 3
    elif magic == IDX_LABELS:
        ndim = 1
    else:
        raise IdxFormatError(f"bad IDX magic 0x{magic:08x}")
    header = 4 + 4 * ndim
    if len(data) < header:
        raise IdxFormatError("truncated IDX dimension header")
    dims = struct.unpack(f">{ndim}I", data[4:header])
    size = int(np.prod(dims))
    payload = data[header:]
    if len(payload) < size:
        raise IdxFormatError(f"truncated payload: {len(payload)} bytes, expected {size}")
    if len(payload) > size:
        raise IdxFormatError(f"{len(payload) - size} trailing bytes after payload")
    arr = np.frombuffer(payload, dtype=np.uint8).reshape(dims).copy()
    if ndim == 3:
        return ImageSet(arr)
    return arr


def to_idx(obj) -> bytes:
    """Inverse of :func:`parse_idx`."""
    if isinstance(obj, ImageSet):
        arr, magic = obj.pixels, IDX_IMAGES
    else:
        arr, magic = np.asarray(obj), IDX_LABELS
    arr = np.ascontiguousarray(arr, dtype=np.uint8)
    expected = 3 if magic == IDX_IMAGES else 1
    if arr.ndim != expected:
        raise ValueError(f"expected a {expected}-D array, got {arr.ndim}-D")
    return struct.pack(f">I{arr.ndim}I", magic, *arr.shape) + arr.tobytes()


def load_mnist(images_path, labels_path):
    with open(images_path, "rb") as f:
        images = parse_idx(f.read())
    with open(labels_path, "rb") as f:
        labels = parse_idx(f.read())
    if not isinstance(images, ImageSet) or isinstance(labels, ImageSet):
        raise IdxFormatError("expected an image file and a label file")
    return ImageSet(images.pixels, labels)


def _grid_shape(n_qubits):
    return 2 ** ((n_qubits + 1) // 2), 2 ** (n_qubits // 2)


def preprocess_example(image, digit, n_qubits=10):
    """Zero-pad a 28x28 image to 32x32, flatten row-major and normalise.

    For ``n_qubits < 10`` the padded image is block-averaged down to a
    ``2**ceil(n/2) x 2**floor(n/2)`` grid first.
    """
    img = np.asarray(image, dtype=float)
    if img.shape != (MNIST_SIDE, MNIST_SIDE):
        raise ValueError(f"expected a 28x28 image, got {img.shape}")
    if not 1 <= n_qubits <= 10:
        raise ValueError("MNIST encoding supports 1..10 qubits")
    padded = np.pad(img, PAD)
    rows, cols = _grid_shape(n_qubits)
    grid = padded.reshape(rows, 32 // rows, cols, 32 // cols).mean(axis=(1, 3))
    vec = grid.ravel()
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise ValueError("all-zero image cannot be amplitude encoded")
    return EncodedExample((vec / norm).astype(complex), 1 if int(digit) % 2 == 0 else 0)


def mnist_dataset(image_set: ImageSet, n_examples, n_qubits, seed):
    """Random subset of ``n_examples`` encoded images, drawn with ``seed``."""
    if image_set.labels is None:
        raise ValueError("image set has no labels")
    rng = as_rng(seed)
    idx = rng.choice(image_set.count, size=min(n_examples, image_set.count), replace=False)
    out = []
    for i in idx:
        if image_set.pixels[i].any():
            out.append(preprocess_example(image_set.pixels[i], image_set.labels[i], n_qubits))
    return out


def _product_center(angles):
    vec = np.ones(1)
    for a in angles:
        vec = np.kron(vec, [np.cos(a), np.sin(a)])
    return vec


def synth_dataset(n_examples, n_qubits, seed, noise=0.5):
    """Two Gaussian blobs in amplitude space.

    Each class centre is a real product state with non-negative amplitudes
    (low entanglement, like natural images). Both centres share the same
    single-qubit factors on the two readout qubits 0 and 1, so the class
    signal sits on the remaining qubits and a ``Z0 Z1`` readout cannot
    separate the classes before training. Samples add isotropic Gaussian
    noise of total norm about ``noise`` and are renormalised. Classes
    alternate, so the split is balanced within one.
    """
    if n_examples < 2:
        raise ValueError("need at least two examples")
    rng = as_rng(seed)
    dim = 2**n_qubits
    shared = rng.uniform(0.0, np.pi / 2, size=min(2, n_qubits))
    centers = []
    for _ in range(2):
        own = rng.uniform(0.0, np.pi / 2, size=n_qubits - shared.size)
        centers.append(_product_center(np.concatenate([shared, own])))
    out = []
    for i in range(n_examples):
        label = i % 2
        v = centers[label] + noise * rng.standard_normal(dim) / np.sqrt(dim)
        out.append(EncodedExample((v / np.linalg.norm(v)).astype(complex), label))
    order = rng.permutation(n_examples)
    return [out[i] for i in order]


def write_csv(path, header, rows):
    """UTF-8 CSV with a header row; ``None`` cells are written empty."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(header)
        for r in rows:
            w.writerow(["" if v is None else _fmt(v) for v in r])


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def write_manifest(path, items):
    """Plain ``key=value`` lines."""
    with open(path, "w", encoding="utf-8") as f:
        for k, v in items.items():
            f.write(f"{k}={v}\n")


def read_manifest(path):
    out = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith("#"):
                k, _, v = line.partition("=")
                out[k.strip()] = v.strip()
    return out
