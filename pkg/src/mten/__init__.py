import logging

logger = logging.getLogger(__name__)


class TensorError(ValueError):
    """Invalid tensor data"""

    pass


class ShapeMismatch(TensorError):
    """Entries, vectors or indices do not match the tensor order/dimension"""

    pass


class NonFiniteEntry(TensorError):
    """NaN or Inf entry: tensors only hold finite reals"""

    pass


class IndexOutOfRange(TensorError, IndexError):
    """Multi-index component outside [1, dim]"""

    pass


class NotNonnegative(TensorError):
    """Tensor has a negative entry: Perron-Frobenius machinery does not apply"""

    pass


class NotZTensor(TensorError):
    """Tensor has a positive off-diagonal entry: M-tensor machinery does not apply"""

    pass


class SpectralOverflow(TensorError):
    """Spectral radius beyond the float range, the tensor needs rescaling"""

    pass


class SpectralWarning(UserWarning):
    """Recoverable numerical problems"""

    pass


class ZeroIterate(SpectralWarning):
    """All components of the iterate vanished: restart with epsilon > 0"""

    pass
