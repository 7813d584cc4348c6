import numpy as np
import scipy.sparse as sps

from src.utils.solver.abort import abort
from src.utils.solver.exceptions import AssemblyError


def assemble_matrix(
        row_dofs: np.ndarray,
        col_dofs: np.ndarray,
        local: np.ndarray,
        shape: tuple[int, int],
) -> sps.csr_matrix:
    """
    Сборка разреженной матрицы из локальных блоков.

    :param row_dofs: Глобальные номера строк, (C, nr).
    :param col_dofs: Глобальные номера столбцов, (C, nc).
    :param local: Локальные матрицы, (C, nr, nc).
    :param shape: Размер глобальной матрицы.
    """

    if not np.all(np.isfinite(local)):
        abort('Локальные матрицы содержат нечисловые значения', AssemblyError)

    rows = np.broadcast_to(row_dofs[:, :, None], local.shape).ravel()
    cols = np.broadcast_to(col_dofs[:, None, :], local.shape).ravel()
    # COO -> CSR суммирует повторы в фиксированном порядке
    matrix = sps.coo_matrix((local.ravel(), (rows, cols)), shape=shape)
    return matrix.tocsr()


def assemble_vector(dofs: np.ndarray, local: np.ndarray, size: int) -> np.ndarray:
    if not np.all(np.isfinite(local)):
        abort('Локальные векторы содержат нечисловые значения', AssemblyError)
    return np.bincount(dofs.ravel(), weights=local.ravel(), minlength=size)
