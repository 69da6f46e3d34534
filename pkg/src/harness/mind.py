"""MIND sweeps: SER and information readouts against MAP and MaxL references."""

import math
from dataclasses import dataclass
from functools import partial
from typing import Optional

from channels.scenarios import AwgnChannel, ChannelScenario, MiddletonChannel
from config.logger import logger
from harness.pool import log_training_event, run_cells
from mind.decoder import MindDecoder, mind_train
from mind.oracles import map_oracle, maxl_oracle, symbol_error_rate
from models.config import ExperimentConfig, MindConfig
from models.errors import DivergenceError
from models.estimates import EntropyEstimate
from models.records import MindRecord
from sampling.rng import Rng


@dataclass(frozen=True)
class MindCell:
    """One trained decoder: a single SNR point, or all of them in single-decoder mode."""

    snr_indices: tuple[int, ...]
    seed: int

    @property
    def run_id(self) -> str:
        if len(self.snr_indices) == 1:
            return f"snr{self.snr_indices[0]}-s{self.seed}"
        return f"all-s{self.seed}"


def gaussian_reference(channel: ChannelScenario) -> AwgnChannel:
    """
    What a receiver that only assumes Gaussian noise believes: same noise
    power, no warp, no impulses.
    """
    if isinstance(channel, MiddletonChannel):
        return AwgnChannel(sigma=math.sqrt(channel.model.variance))
    return AwgnChannel(sigma=getattr(channel, "sigma", 1.0), d=channel.dim)


def evaluate_decoders(
    decoder: MindDecoder,
    channel: ChannelScenario,
    n: int,
    rng: Rng,
) -> dict[str, tuple[float, Optional[EntropyEstimate]]]:
    """SER of MIND, genie MAP and Gaussian MaxL on one shared evaluation batch."""
    alphabet = decoder.alphabet
    sent, x = alphabet.sample(n, rng)
    y = channel.apply(x, rng)
    entropies = decoder.estimate_entropies(y)
    return {
        "mind": (symbol_error_rate(decoder.decode(y), sent), entropies),
        "map": (symbol_error_rate(map_oracle(channel.log_likelihood, alphabet, y), sent), None),
        "maxl": (
            symbol_error_rate(maxl_oracle(gaussian_reference(channel).log_likelihood, alphabet, y), sent),
            None,
        ),
    }


def run_mind_cell(master_seed: int, config: MindConfig, cell: MindCell) -> list[MindRecord]:
    """
    Train one decoder on the cell's SNR points and evaluate it at each of them.

    Raises:
        DivergenceError: If training diverges; a training event is logged first.
    """
    rng = Rng(master_seed).child(cell.snr_indices[0] if len(cell.snr_indices) == 1 else 0).child(cell.seed)
    alphabet = config.build_alphabet()
    channels = [config.channel_for(config.snr_db[index]) for index in cell.snr_indices]
    decoder = MindDecoder.build(
        alphabet,
        channels[0].dim,
        rng.child_seed(0),
        hidden=config.hidden,
        hidden_activation=config.hidden_activation,
        lr=config.lr,
    )
    try:
        mind_train(decoder, channels, config.iters, config.n, rng.child(1))
    except DivergenceError as exc:
        log_training_event("mind", cell.run_id, "diverged", str(exc))
        raise

    records: list[MindRecord] = []
    for offset, (index, channel) in enumerate(zip(cell.snr_indices, channels)):
        snr = config.snr_db[index]
        results = evaluate_decoders(decoder, channel, config.eval_n, rng.child(2 + offset))
        for name, (ser, entropies) in results.items():
            records.append(
                MindRecord(
                    run_id=cell.run_id,
                    seed=cell.seed,
                    channel=channel.name,
                    decoder=name,
                    snr_db=snr,
                    ser=ser,
                    source_entropy_bits=entropies.source_entropy_bits if entropies else None,
                    conditional_entropy_bits=entropies.conditional_entropy_bits if entropies else None,
                    mi_bits=entropies.mutual_information_bits if entropies else None,
                    error_probability=entropies.error_probability if entropies else None,
                )
            )
        logger.info(
            f"{cell.run_id} at {snr:g} dB: SER mind={results['mind'][0]:.5f} "
            f"map={results['map'][0]:.5f} maxl={results['maxl'][0]:.5f}"
        )
    log_training_event("mind", cell.run_id, "finished", f"{len(cell.snr_indices)} SNR points")
    return records


def mind_cells(config: MindConfig) -> list[MindCell]:
    if config.single_decoder:
        every = tuple(range(len(config.snr_db)))
        return [MindCell(snr_indices=every, seed=seed) for seed in config.seeds]
    return [
        MindCell(snr_indices=(index,), seed=seed)
        for index in range(len(config.snr_db))
        for seed in config.seeds
    ]


def run_mind(config: ExperimentConfig, threads: int = 1) -> list[MindRecord]:
    """Per-SNR decoders by default; one decoder per seed in single-decoder mode."""
    section = config.mind
    logger.info(
        f"MIND sweep: {section.alphabet} over {section.channel} at {section.snr_db} dB, "
        f"{len(section.seeds)} seeds{' (single decoder)' if section.single_decoder else ''}"
    )
    results = run_cells(partial(run_mind_cell, config.seed, section), mind_cells(section), threads)
    records = [record for cell_records in results for record in cell_records]
    return sorted(records, key=lambda r: (r.snr_db, r.seed, ("mind", "map", "maxl").index(r.decoder)))
