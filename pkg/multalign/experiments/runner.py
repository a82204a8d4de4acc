# Licensed under the MIT License.
"""
Experiment drivers: recovery grid, adding modes, mode ordering, and de-anonymization
"""

import logging
import multiprocessing as mp
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from multalign.config import MsdConfig, SyntheticConfig
from multalign.exceptions import MultalignDataError
from multalign.experiments import (
    RecoveryRecord,
    edge_recovery,
    gen_instance_pair,
    gen_reference,
    trial_rng,
)
from multalign.network import ModeStats, MultimodalNetwork, mode_statistics
from multalign.pipeline import (
    align_multimodal,
    align_pairwise_baseline,
    best_candidates,
    matcher_names,
    multimodal_overlap,
)


LOGGER = logging.getLogger(__name__)

METHODS = ("msd", "pairwise", "difference")
ORDERING_MEASURES = (*ModeStats.MEASURES, "random")


class TrialTask(NamedTuple):
    """Everything a worker needs to run one trial"""

    synthetic: SyntheticConfig
    msd: MsdConfig
    matcher: str
    cell: int
    trial: int


def run_trial(task: TrialTask) -> Tuple[float, float]:
    """
    Edge recovery of MSD and of the best pairwise baseline on one generated instance
    """

    rng = trial_rng(task.synthetic.seed, task.cell, task.trial)
    pair = gen_instance_pair(gen_reference(task.synthetic, rng), task.synthetic, rng)

    multimodal = align_multimodal(pair.a, pair.b, task.msd, task.matcher)
    pairwise = align_pairwise_baseline(pair.a, pair.b, task.msd, task.matcher)

    return (
        edge_recovery(multimodal, pair.a, pair.b),
        edge_recovery(pairwise, pair.a, pair.b),
    )


def run_trials(tasks: Sequence[TrialTask], jobs: int = 1) -> List[Tuple[float, float]]:
    """
    Run trials in order, on a process pool when jobs > 1
    Each trial seeds its own stream, so results do not depend on jobs
    """

    if jobs > 1 and len(tasks) > 1:
        with mp.Pool(processes=jobs) as pool:
            return pool.map(run_trial, tasks)

    return [run_trial(task) for task in tasks]


def cell_records(
    synthetic: SyntheticConfig, results: Sequence[Tuple[float, float]]
) -> List[RecoveryRecord]:
    """
    Records for MSD, the pairwise baseline, and their per-trial difference
    """

    msd_values = tuple(r[0] for r in results)
    pairwise_values = tuple(r[1] for r in results)
    differences = tuple(a - b for a, b in zip(msd_values, pairwise_values))

    return [
        RecoveryRecord(
            synthetic.vertex_del_p, synthetic.edge_del_q, synthetic.modes, method, values
        )
        for method, values in zip(METHODS, (msd_values, pairwise_values, differences))
    ]


def run_cell(
    synthetic: SyntheticConfig, msd_cfg: MsdConfig, matcher: str, cell: int, jobs: int = 1
) -> List[RecoveryRecord]:
    """
    All trials of one experiment cell
    """

    tasks = [TrialTask(synthetic, msd_cfg, matcher, cell, t) for t in range(synthetic.trials)]
    records = cell_records(synthetic, run_trials(tasks, jobs))
    LOGGER.info(
        "p=%g q=%g m=%d: MSD %.3f, pairwise %.3f",
        synthetic.vertex_del_p,
        synthetic.edge_del_q,
        synthetic.modes,
        records[0].mean,
        records[1].mean,
    )
    return records


def run_recovery_grid(
    synthetic: SyntheticConfig,
    p_values: Iterable[float],
    q_values: Iterable[float],
    msd_cfg: Optional[MsdConfig] = None,
    matcher: str = "all",
    jobs: int = 1,
) -> List[RecoveryRecord]:
    """
    Recovery of MSD against the best pairwise alignment over a (p, q) grid
    """

    msd_cfg = msd_cfg or MsdConfig()
    cells = [(p, q) for p in p_values for q in q_values]
    records = []

    for cell, (p, q) in enumerate(cells):
        LOGGER.info("(%d of %d) Recovery grid cell p=%g q=%g", cell + 1, len(cells), p, q)
        cfg = synthetic.copy(update={"vertex_del_p": p, "edge_del_q": q})
        records.extend(run_cell(cfg, msd_cfg, matcher, cell, jobs))

    return records


def run_adding_modes(
    synthetic: SyntheticConfig,
    mode_counts: Iterable[int],
    settings: Iterable[Tuple[float, float]] = ((0.1, 0.2), (0.2, 0.1)),
    msd_cfg: Optional[MsdConfig] = None,
    matcher: str = "all",
    jobs: int = 1,
) -> List[RecoveryRecord]:
    """
    Recovery as the number of modes grows, at each fixed (p, q) setting
    """

    msd_cfg = msd_cfg or MsdConfig()
    cells = [(p, q, m) for p, q in settings for m in mode_counts]
    records = []

    for cell, (p, q, modes) in enumerate(cells):
        LOGGER.info("(%d of %d) Adding modes: p=%g q=%g m=%d", cell + 1, len(cells), p, q, modes)
        cfg = synthetic.copy(update={"vertex_del_p": p, "edge_del_q": q, "modes": modes})
        records.extend(run_cell(cfg, msd_cfg, matcher, cell, jobs))

    return records


class OrderingPoint(NamedTuple):
    """Full-network overlap reached by aligning on the top modes_used modes"""

    measure: str
    modes_used: int
    overlap: int


def mode_order(net: MultimodalNetwork, measure: str, seed: int = 0) -> List[int]:
    """
    Mode indices by descending measure on the given network, ties by mode index
    """

    if measure == "random":
        return np.random.default_rng(seed).permutation(net.n_modes).tolist()
    if measure not in ModeStats.MEASURES:
        raise MultalignDataError(
            f"Unknown ordering measure '{measure}', expected one of {ORDERING_MEASURES}"
        )

    stats = mode_statistics(net)
    return sorted(range(net.n_modes), key=lambda k: -stats[k].measure(measure))


def run_mode_ordering(
    net_a: MultimodalNetwork,
    net_b: MultimodalNetwork,
    measure: str,
    msd_cfg: Optional[MsdConfig] = None,
    matcher: str = "all",
    steps: Optional[Iterable[int]] = None,
    seed: int = 0,
) -> List[OrderingPoint]:
    """
    Align on growing prefixes of the ordered modes and score each alignment on all modes
    """

    msd_cfg = msd_cfg or MsdConfig()
    order = mode_order(net_a, measure, seed)
    steps = sorted(set(steps)) if steps is not None else range(1, net_a.n_modes + 1)
    if any(not 1 <= s <= net_a.n_modes for s in steps):
        raise MultalignDataError(f"Prefix sizes must lie in 1..{net_a.n_modes}")

    points = []
    for num, size in enumerate(steps, 1):
        LOGGER.info("(%d of %d) Ordering by %s: top %d modes", num, len(steps), measure, size)
        prefix = order[:size]
        result = align_multimodal(
            net_a.select_modes(prefix), net_b.select_modes(prefix), msd_cfg, matcher
        )
        overlap, _ = multimodal_overlap(result.matching, net_a, net_b)
        points.append(OrderingPoint(measure, size, overlap))

    return points


class OverlapRow(NamedTuple):
    """One row of the de-anonymization overlap table"""

    method: str
    overlap: int


def run_deanonymization(
    net_a: MultimodalNetwork,
    net_b: MultimodalNetwork,
    msd_cfg: Optional[MsdConfig] = None,
    matcher: str = "all",
) -> List[OverlapRow]:
    """
    Overlap reached by each multimodal matcher and by the smashed and best-mode baselines
    """

    msd_cfg = msd_cfg or MsdConfig()
    multimodal = best_candidates(align_multimodal(net_a, net_b, msd_cfg, matcher))
    pairwise = best_candidates(align_pairwise_baseline(net_a, net_b, msd_cfg, matcher))

    rows = [OverlapRow(name, multimodal[name]) for name in matcher_names(matcher)]
    rows.append(OverlapRow("pairwise smashed", pairwise["smashed"]))
    modes = {source: value for source, value in pairwise.items() if source != "smashed"}
    best_mode = max(modes, key=modes.get)
    rows.append(OverlapRow(f"pairwise best mode ({best_mode})", modes[best_mode]))

    for row in rows:
        LOGGER.info("%-32s %d", row.method, row.overlap)

    return rows
