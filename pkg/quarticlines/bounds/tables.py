#!/usr/bin/env python3
"""
Summary tables for rational and irrational quartics, recomputed and compared
cell by cell with the printed values.
"""

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from .elkies import series_elkies
from .profiles import IRRATIONAL_SERIES, RATIONAL_SERIES, SeriesProfile, get_profile

logger = logging.getLogger(__name__)

COLUMNS = {
    'rational': ('O', 'max', 'M', 'b2', 'E', 'Sigma', 'bound'),
    'irrational': ('sing', 'Fn', 'b2', 'E', 'Sigma', 'bound'),
}

# (series, column) -> explanation; such cells are reported but never fail
KNOWN_DISCREPANCIES = {
    ('2X9', 'E'): "printed 11; n = 3 with 8 lines through the two points gives 4 + 8 = 12",
}


@dataclass
class TableCell:
    computed: str
    paper: str
    source: str = 'computed'
    known_issue: str = ''

    @property
    def matches_paper(self) -> bool:
        return self.computed == self.paper

    def to_dict(self) -> dict:
        out = {
            'computed': self.computed,
            'paper': self.paper,
            'source': self.source,
            'matches_paper': self.matches_paper,
        }
        if self.known_issue:
            out['known_issue'] = self.known_issue
        return out


@dataclass
class TableRow:
    series: str
    cells: Dict[str, TableCell] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {'series': self.series, 'cells': {k: c.to_dict() for k, c in self.cells.items()}}


@dataclass
class TableReport:
    which: str
    rows: List[TableRow] = field(default_factory=list)

    @property
    def columns(self) -> Sequence[str]:
        return COLUMNS[self.which]

    def mismatches(self, include_known: bool = False) -> List[str]:
        out = []
        for row in self.rows:
            for column, cell in row.cells.items():
                if cell.matches_paper or (cell.known_issue and not include_known):
                    continue
                out.append(f"{row.series}.{column}: computed {cell.computed}, paper {cell.paper}")
        return out

    def to_dict(self) -> dict:
        return {
            'table': self.which,
            'columns': list(self.columns),
            'rows': [row.to_dict() for row in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        header = []
        for column in self.columns:
            header += [column, f"{column}_paper", f"{column}_matches_paper"]
        writer.writerow(header)
        for row in self.rows:
            line = []
            for column in self.columns:
                cell = row.cells[column]
                line += [cell.computed, cell.paper, str(cell.matches_paper).lower()]
            writer.writerow(line)
        return buffer.getvalue()

    def to_text(self) -> str:
        width = 12
        lines = [' '.join(c.ljust(width) for c in self.columns)]
        for row in self.rows:
            rendered = []
            for column in self.columns:
                cell = row.cells[column]
                mark = '' if cell.matches_paper else ('?' if cell.known_issue else '!')
                rendered.append((cell.computed + mark).ljust(width))
            lines.append(' '.join(rendered))
        return '\n'.join(lines)


def _paper_only(value: str) -> TableCell:
    return TableCell(computed=value, paper=value, source='paper')


def _default_bnd(profile: SeriesProfile) -> int:
    from ..configs.admissible import profile_bnd
    return profile_bnd(profile)


def table_row(series: str, bnd_of: Optional[Callable[[SeriesProfile], int]] = None) -> TableRow:
    profile = get_profile(series)
    paper = profile.paper
    row = TableRow(series=profile.series)
    if profile.irrational:
        row.cells['sing'] = _paper_only(profile.title)
        row.cells['Fn'] = _paper_only(paper.max_lines)
    else:
        row.cells['O'] = _paper_only(profile.title)
        row.cells['max'] = _paper_only(paper.max_lines)
        row.cells['M'] = _paper_only(paper.m_bound)
    row.cells['b2'] = TableCell(str(profile.b2_rational), paper.b2)
    row.cells['E'] = TableCell(str(series_elkies(profile.series).total), paper.elkies)
    row.cells['Sigma'] = TableCell(profile.sigma().name.replace('+', '⊕'), paper.sigma)
    if bnd_of is None:
        row.cells['bound'] = _paper_only(paper.bound)
    else:
        bnd = bnd_of(profile)
        row.cells['bound'] = TableCell(f"{bnd}↦{bnd + profile.k_line_max}", paper.bound)
    for column, cell in row.cells.items():
        note = KNOWN_DISCREPANCIES.get((profile.series, column))
        if note and not cell.matches_paper:
            cell.known_issue = note
    return row


def table_report(which: str, series: Optional[Sequence[str]] = None,
                 compute_bounds: bool = True) -> TableReport:
    """
    Recompute a summary table. ``which`` is 'rational' (or '1') or
    'irrational' (or '3'); ``series`` restricts the rows, and an empty
    sequence yields a header-only table.
    """
    which = {'1': 'rational', '3': 'irrational'}.get(str(which), str(which))
    if which not in COLUMNS:
        raise ValueError(f"Unknown table: {which} (expected rational/1 or irrational/3)")
    if series is None:
        series = RATIONAL_SERIES if which == 'rational' else IRRATIONAL_SERIES
    bnd_of = _default_bnd if compute_bounds else None
    report = TableReport(which=which, rows=[table_row(s, bnd_of) for s in series])
    for issue in report.mismatches():
        logger.warning(f"Table {which}: {issue}")
    return report
