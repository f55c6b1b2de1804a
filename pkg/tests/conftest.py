import numpy as np
import pytest

from advkit.numcore import Classifier, Layer
from advkit.rng import make_generator


def binary_linear(w, b):
    """Two-class model with logits (0, w.x + b): class 1 wins iff w.x+b > 0."""
    w = np.asarray(w, dtype=np.float64)
    return Classifier([
        Layer(np.vstack([np.zeros_like(w), w]), np.array([0.0, float(b)]), "id")
    ])


def logistic_model(w=2.0, b=0.0):
    """The 1-D logistic classifier used by several worked examples."""
    return Classifier([
        Layer(np.array([[0.0], [float(w)]]), np.array([0.0, float(b)]), "id")
    ])


def random_model(rng, input_dim, num_classes, hidden=()):
    dims = [input_dim, *hidden, num_classes]
    layers = []
    for k in range(len(dims) - 1):
        w = rng.normal(0.0, 1.0 / np.sqrt(dims[k]), size=(dims[k + 1], dims[k]))
        b = rng.normal(0.0, 0.1, size=dims[k + 1])
        layers.append(Layer(w, b, "relu" if k < len(dims) - 2 else "id"))
    return Classifier(layers)


def results_equal(a, b):
    """Bit-exact comparison of two attack results."""
    return (a.adversarial.tobytes() == b.adversarial.tobytes()
            and a.success == b.success
            and a.iterations_used == b.iterations_used
            and a.norms == b.norms
            and a.queries == b.queries
            and a.degraded == b.degraded)


@pytest.fixture
def rng():
    return make_generator(20240811)
