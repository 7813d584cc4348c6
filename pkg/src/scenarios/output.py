import csv
from pathlib import Path
from typing import NamedTuple

import numpy as np
from loguru import logger
from vtkmodules.util.numpy_support import numpy_to_vtk, vtk_to_numpy
from vtkmodules.vtkCommonCore import vtkPoints
from vtkmodules.vtkCommonDataModel import (
    VTK_TRIANGLE, vtkCellArray, vtkUnstructuredGrid,
)
from vtkmodules.vtkIOLegacy import vtkDataSetReader, vtkUnstructuredGridWriter

from src.consts import Subdomain
from src.fem import evaluate
from src.mesh import TriangleMesh
from src.mms import ErrorReport
from src.system import Discretization, SystemState, recover_fluid_pressure
from src.utils.solver.abort import abort
from src.utils.solver.exceptions import OutputError


BARYCENTER = np.array([[1.0 / 3.0, 1.0 / 3.0]])


class VtkFields(NamedTuple):
    """
    Содержимое файла legacy VTK: сетка и поля.
    """

    points: np.ndarray
    cells: np.ndarray
    point_data: dict[str, np.ndarray]
    cell_data: dict[str, np.ndarray]

    def to_dict(self):
        return self._asdict()


def _vtk_array(name: str, values: np.ndarray):
    values = np.asarray(values, dtype=float)
    if values.ndim == 2:
        padded = np.zeros((len(values), 3))
        padded[:, :values.shape[1]] = values
        values = padded
    array = numpy_to_vtk(np.ascontiguousarray(values), deep=True)
    array.SetName(name)
    return array


def _unstructured_grid(mesh: TriangleMesh) -> vtkUnstructuredGrid:
    points = vtkPoints()
    xyz = np.zeros((mesh.n_vertices, 3))
    xyz[:, :2] = mesh.vertices
    points.SetData(numpy_to_vtk(xyz, deep=True))

    cells = vtkCellArray()
    for triangle in mesh.triangles:
        cells.InsertNextCell(3, [int(v) for v in triangle])

    grid = vtkUnstructuredGrid()
    grid.SetPoints(points)
    grid.SetCells(VTK_TRIANGLE, cells)
    return grid


def write_vtk(
        path: str | Path,
        mesh: TriangleMesh,
        point_data: dict[str, np.ndarray] | None = None,
        cell_data: dict[str, np.ndarray] | None = None,
        title: str = 'fields',
) -> Path:
    """
    Запись сетки и полей в ASCII legacy VTK (UNSTRUCTURED_GRID).

    :param point_data: Поля в вершинах: (N,) - скаляры, (N, 2) - векторы.
    :param cell_data: Поля в ячейках, формы (M,) или (M, 2).
    :return: Путь к файлу.
    """

    path = Path(path)
    grid = _unstructured_grid(mesh)
    for name, values in (cell_data or {}).items():
        grid.GetCellData().AddArray(_vtk_array(name, values))
    for name, values in (point_data or {}).items():
        grid.GetPointData().AddArray(_vtk_array(name, values))

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        abort(f'Не удалось создать каталог {path.parent}: {e}', OutputError)

    writer = vtkUnstructuredGridWriter()
    writer.SetFileName(str(path))
    writer.SetInputData(grid)
    writer.SetFileTypeToASCII()
    writer.SetHeader(title)
    if not writer.Write():
        abort(f'Не удалось записать {path}', OutputError)
    logger.debug(f'Записан файл {path}')
    return path


def _arrays(data) -> dict[str, np.ndarray]:
    arrays = {}
    for i in range(data.GetNumberOfArrays()):
        array = data.GetArray(i)
        values = vtk_to_numpy(array).astype(float)
        # векторы пишутся с нулевой z-компонентой
        if values.ndim == 2 and values.shape[1] == 3:
            values = values[:, :2]
        arrays[array.GetName()] = values
    return arrays


def read_fields(path: str | Path) -> VtkFields:
    """
    Чтение файла, записанного write_vtk.
    """

    path = Path(path)
    if not path.is_file():
        abort(f'Файл {path} не найден', OutputError)

    reader = vtkDataSetReader()
    reader.SetFileName(str(path))
    reader.ReadAllScalarsOn()
    reader.ReadAllVectorsOn()
    reader.ReadAllFieldsOn()
    if not reader.IsFileUnstructuredGrid():
        abort(f'{path} не является файлом legacy VTK с UNSTRUCTURED_GRID',
              OutputError)
    reader.Update()

    grid = reader.GetOutput()
    if (
            grid is None
            or grid.GetNumberOfPoints() == 0
            or grid.GetNumberOfCells() == 0
    ):
        abort(f'{path}: повреждённый файл VTK, нет точек или ячеек',
              OutputError)

    points = vtk_to_numpy(grid.GetPoints().GetData())[:, :2].astype(float)
    cells = []
    for i in range(grid.GetNumberOfCells()):
        cell = grid.GetCell(i)
        if cell.GetCellType() != VTK_TRIANGLE:
            abort(f'{path}: ячейка {i} не треугольник', OutputError)
        cells.append([cell.GetPointId(j) for j in range(3)])

    return VtkFields(
        points,
        np.array(cells, dtype=np.int64),
        _arrays(grid.GetPointData()),
        _arrays(grid.GetCellData()),
    )


def write_fields(
        disc: Discretization,
        state: SystemState,
        directory: str | Path,
        pressure_shift: float = 0.0,
        q_f=None,
) -> list[Path]:
    """
    Снимок решения: по файлу на подобласть.

    P0 поля пишутся как данные ячеек, P1 - как данные вершин, поля BDM
    берутся в центрах ячеек.

    :param pressure_shift: Добавляется к давлениям (опорное давление).
    :return: Пути к файлам.
    """

    spaces = disc.spaces
    directory = Path(directory)

    sigma = evaluate(spaces.sigma_f, state.sigma_f, BARYCENTER).values[:, 0]
    velocity = evaluate(spaces.u_f, state.u_f, BARYCENTER).values[:, 0]
    vorticity = evaluate(spaces.gamma_f, state.gamma_f, BARYCENTER).values[:, 0]
    pressure = recover_fluid_pressure(
        spaces.sigma_f, spaces.u_f, state.sigma_f, state.u_f,
        disc.params, q_f=q_f, t=state.t,
    ) + pressure_shift
    fluid = write_vtk(
        directory / f'{Subdomain.FLUID.value}_{state.step:05d}.vtk',
        disc.fluid_mesh,
        cell_data={
            'u_f': velocity,
            'p_f': pressure,
            'gamma_f': vorticity[:, 0, 1],
            'sigma_f_row0': sigma[:, 0, :],
            'sigma_f_row1': sigma[:, 1, :],
        },
        title=f'fluid t={state.t:.6g}',
    )

    flux = evaluate(spaces.u_p, state.u_p, BARYCENTER).values[:, 0]
    poro = write_vtk(
        directory / f'{Subdomain.POROELASTIC.value}_{state.step:05d}.vtk',
        disc.poro_mesh,
        point_data={'eta_p': state.eta_p.reshape(-1, 2)},
        cell_data={
            'p_p': state.p_p + pressure_shift,
            'u_p': flux,
        },
        title=f'poroelastic t={state.t:.6g}',
    )
    return [fluid, poro]


def convergence_csv_path(out: str | Path) -> Path:
    out = Path(out)
    return out if out.suffix == '.csv' else out / 'convergence.csv'


def write_convergence_csv(
        report: ErrorReport,
        rates: dict[str, list[float | None]],
        path: str | Path,
) -> Path:
    """
    Таблица сходимости: level, h_f, h_p, h_tf, h_tp, пары
    e_<поле>/r_<поле>, iterations.
    """

    path = Path(path)
    header = ['level', 'h_f', 'h_p', 'h_tf', 'h_tp']
    for field in report.fields:
        header += [f'e_{field}', f'r_{field}']
    header.append('iterations')

    rows = []
    for i, level in enumerate(report.levels):
        row = [level.level, level.h_f, level.h_p, level.h_tf, level.h_tp]
        for field in report.fields:
            value = rates.get(field, [])[i - 1] if i > 0 and rates else None
            row += [level.errors[field], '' if value is None else value]
        row.append(level.iterations)
        rows.append(row)

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open('w', newline='', encoding='utf-8') as file:
            writer = csv.writer(file)
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as e:
        abort(f'Не удалось записать {path}: {e}', OutputError)
    logger.info(f'Таблица сходимости записана в {path}')
    return path


def read_csv(path: str | Path) -> list[dict[str, str]]:
    with Path(path).open(newline='', encoding='utf-8') as file:
        return list(csv.DictReader(file))


def write_rows_csv(rows: list[dict], path: str | Path) -> Path:
    path = Path(path)
    if not rows:
        return path
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open('w', newline='', encoding='utf-8') as file:
            writer = csv.DictWriter(file, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
    except OSError as e:
        abort(f'Не удалось записать {path}: {e}', OutputError)
    return path
