import re
from enum import Enum
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from src.entity.models.hypergraph import HyperedgeRecord, Hypergraph, build_incidence
from src.shared.errors import DatasetIOError, EmptyDataset, ParseError

logger = structlog.get_logger(__name__)

TOKEN_SPLIT = re.compile(r'[,\s]+')
HEADER_PREFIX = '# hyperlap num_nodes:'
ISOLATED_PREFIX = '# isolated:'
PathLike = Union[str, Path]


class DatasetFormat(Enum):
    EDGE_LIST_LINES = "edgelist"
    NVERTS_SIMPLICES = "nverts"


class HypergraphRepository:
    def __init__(self, dedupe: bool = True, drop_singletons: bool = True):
        self.dedupe = dedupe
        self.drop_singletons = drop_singletons

    def load(self, paths: Union[PathLike, Sequence[PathLike]],
             dataset_format: DatasetFormat = DatasetFormat.EDGE_LIST_LINES) -> Hypergraph:
        if isinstance(paths, (str, Path)):
            paths = [paths]
        paths = [Path(p) for p in paths]

        if dataset_format is DatasetFormat.EDGE_LIST_LINES:
            if len(paths) != 1:
                raise ValueError("Edge-list datasets are read from exactly one file")
            header = self._read_header(paths[0])
            if header is not None:
                return self._load_written(paths[0], *header)
            raw_edges = list(self._read_edge_list(paths[0]))
        else:
            nverts_path, simplices_path = self._resolve_nverts_paths(paths)
            raw_edges = list(self._read_nverts(nverts_path, simplices_path))

        return self._assemble(raw_edges, source=str(paths[0]))

    def write(self, g: Hypergraph, path: PathLike, write_levels: bool = False) -> str:
        """Write one hyperedge per line under a header recording the node count.

        Degree-0 nodes are listed on an ``# isolated:`` line so that reading the
        file back restores the same node set. Both header lines are comments to
        other edge-list readers.
        """
        path = Path(path)
        isolated = [g.label_of(int(v)) for v in np.flatnonzero(g.degrees == 0)]
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', encoding='utf-8') as f:
                f.write(f"{HEADER_PREFIX} {g.num_nodes}\n")
                if isolated:
                    f.write(f"{ISOLATED_PREFIX} {' '.join(isolated)}\n")
                for edge in g.edges:
                    f.write(' '.join(g.label_of(v) for v in edge.nodes))
                    f.write('\n')

            if write_levels:
                with open(levels_path_for(path), 'w', encoding='utf-8') as f:
                    for edge in g.edges:
                        f.write(f"{edge.level if edge.level is not None else ''}\n")
            else:
                # a stale side file would be read back with this graph
                levels_path_for(path).unlink(missing_ok=True)
        except OSError as e:
            raise DatasetIOError(f"Could not write hypergraph to {path}: {e}") from e

        logger.info("hypergraph_written", path=str(path), num_nodes=g.num_nodes,
                    num_edges=g.num_edges, isolated=len(isolated))
        return str(path)

    def _assemble(self, raw_edges: List[Tuple[str, ...]], source: str) -> Hypergraph:
        preprocessed = preprocess(raw_edges, self.dedupe, self.drop_singletons)
        if not preprocessed:
            raise EmptyDataset(f"No hyperedges survive preprocessing in {source}")

        dense_edges, labels = relabel(preprocessed)
        g = build_incidence(dense_edges, len(labels), labels=labels)
        logger.info("dataset_loaded", source=source, raw_edges=len(raw_edges),
                    num_nodes=g.num_nodes, num_edges=g.num_edges,
                    dedupe=self.dedupe, drop_singletons=self.drop_singletons)
        return g

    def _read_header(self, path: Path) -> Optional[Tuple[int, List[str]]]:
        num_nodes: Optional[int] = None
        isolated: List[str] = []
        for line_number, line in self._lines(path):
            if num_nodes is None:
                if not line.startswith(HEADER_PREFIX):
                    return None
                try:
                    num_nodes = int(line[len(HEADER_PREFIX):])
                except ValueError:
                    raise ParseError(f"malformed node count header {line!r}", line_number, str(path))
                continue
            if line.startswith(ISOLATED_PREFIX):
                isolated = [t for t in TOKEN_SPLIT.split(line[len(ISOLATED_PREFIX):]) if t]
            break
        if num_nodes is None:
            return None
        return num_nodes, isolated

    def _load_written(self, path: Path, num_nodes: int, isolated: List[str]) -> Hypergraph:
        # Written files are read back exactly: repeats and singletons are kept.
        edges = preprocess(list(self._read_edge_list(path)), dedupe=False, drop_singletons=False)
        if not edges:
            raise EmptyDataset(f"No hyperedges in {path}")

        dense_edges, labels = relabel(edges)
        known = set(labels)
        labels.extend(label for label in isolated if label not in known)
        if len(labels) != num_nodes:
            raise ParseError(f"header declares {num_nodes} nodes but the file holds {len(labels)}",
                             1, str(path))

        levels = self._read_levels(levels_path_for(path), len(dense_edges))
        records = [HyperedgeRecord.from_nodes(nodes, level)
                   for nodes, level in zip(dense_edges, levels)]
        g = build_incidence(records, num_nodes, labels=labels)
        logger.info("written_hypergraph_loaded", source=str(path), num_nodes=g.num_nodes,
                    num_edges=g.num_edges, isolated=len(isolated),
                    levels=any(level is not None for level in levels))
        return g

    def _read_levels(self, path: Path, num_edges: int) -> List[Optional[int]]:
        if not path.exists():
            return [None] * num_edges
        levels: List[Optional[int]] = []
        for line_number, line in self._lines(path):
            if not line:
                levels.append(None)
                continue
            try:
                levels.append(int(line))
            except ValueError:
                raise ParseError(f"expected an integer level, got {line!r}", line_number, str(path))
        if len(levels) != num_edges:
            raise ParseError(f"{len(levels)} levels for {num_edges} hyperedges", len(levels), str(path))
        return levels

    @staticmethod
    def _lines(path: Path) -> Iterator[Tuple[int, str]]:
        try:
            with open(path, 'rb') as f:
                for line_number, raw in enumerate(f, start=1):
                    try:
                        yield line_number, raw.decode('utf-8').strip()
                    except UnicodeDecodeError as e:
                        raise ParseError(f"invalid UTF-8 ({e.reason})", line_number, str(path))
        except FileNotFoundError as e:
            raise DatasetIOError(f"Dataset file not found: {path}") from e
        except OSError as e:
            raise DatasetIOError(f"Could not read {path}: {e}") from e

    def _read_edge_list(self, path: Path) -> Iterator[Tuple[str, ...]]:
        for _, line in self._lines(path):
            if not line or line.startswith('#'):
                continue
            yield tuple(t for t in TOKEN_SPLIT.split(line) if t)

    def _read_nverts(self, nverts_path: Path, simplices_path: Path) -> Iterator[Tuple[str, ...]]:
        labels = ((n, line) for n, line in self._lines(simplices_path)
                  if line and not line.startswith('#'))
        for line_number, line in self._lines(nverts_path):
            if not line or line.startswith('#'):
                continue
            try:
                count = int(line)
            except ValueError:
                raise ParseError(f"expected an integer hyperedge size, got {line!r}",
                                 line_number, str(nverts_path))
            if count < 0:
                raise ParseError(f"negative hyperedge size {count}", line_number, str(nverts_path))
            edge = []
            for _ in range(count):
                item = next(labels, None)
                if item is None:
                    raise ParseError("simplices file ended before all hyperedges were read",
                                     line_number, str(nverts_path))
                edge.append(item[1])
            yield tuple(edge)

    @staticmethod
    def _resolve_nverts_paths(paths: List[Path]) -> Tuple[Path, Path]:
        if len(paths) == 2:
            return paths[0], paths[1]
        if len(paths) != 1:
            raise ValueError("nverts datasets need a name prefix or the nverts and simplices files")
        prefix = str(paths[0])
        for suffix in ('-nverts.txt', '-simplices.txt'):
            if prefix.endswith(suffix):
                prefix = prefix[:-len(suffix)]
        return Path(f"{prefix}-nverts.txt"), Path(f"{prefix}-simplices.txt")


def preprocess(raw_edges: Sequence[Sequence[str]], dedupe: bool,
               drop_singletons: bool) -> List[Tuple[str, ...]]:
    """Collapse within-edge duplicate labels, then dedupe (as sets), then drop singletons."""
    result = []
    seen = set()
    for edge in raw_edges:
        collapsed = tuple(dict.fromkeys(edge))
        if not collapsed:
            continue
        if dedupe:
            key = frozenset(collapsed)
            if key in seen:
                continue
            seen.add(key)
        if drop_singletons and len(collapsed) == 1:
            continue
        result.append(collapsed)
    return result


def relabel(edges: Sequence[Sequence[str]]) -> Tuple[List[List[int]], List[str]]:
    """Map labels to dense ids in order of first appearance."""
    ids: Dict[str, int] = {}
    labels: List[str] = []
    dense_edges = []
    for edge in edges:
        dense = []
        for label in edge:
            if label not in ids:
                ids[label] = len(labels)
                labels.append(label)
            dense.append(ids[label])
        dense_edges.append(dense)
    return dense_edges, labels


def levels_path_for(path: PathLike) -> Path:
    path = Path(path)
    return path.with_name(path.name + '.levels')


def load_hypergraph(paths: Union[PathLike, Sequence[PathLike]],
                    dataset_format: DatasetFormat = DatasetFormat.EDGE_LIST_LINES,
                    dedupe: bool = True, drop_singletons: bool = True) -> Hypergraph:
    return HypergraphRepository(dedupe, drop_singletons).load(paths, dataset_format)


def write_hypergraph(g: Hypergraph, path: PathLike, write_levels: bool = False) -> str:
    return HypergraphRepository().write(g, path, write_levels)
