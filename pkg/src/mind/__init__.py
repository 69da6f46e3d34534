"""Maximum-mutual-information neural decoding and its reference decoders."""

from .alphabet import (
    ALPHABETS,
    Alphabet,
    bpsk,
    build_alphabet,
    noise_std_from_ebn0,
    pam,
    pam4_nonuniform,
)
from .decoder import (
    MindDecoder,
    PosteriorTable,
    decide,
    decode,
    entropies_from_posteriors,
    estimate_entropies,
    mind_train,
    normalize_posteriors,
    posterior,
)
from .oracles import (
    exact_posteriors,
    genie_optimal_d,
    log_likelihood_table,
    map_oracle,
    maxl_oracle,
    mind_value_unsupervised,
    pam_ser_awgn,
    symbol_error_rate,
)

__all__ = [
    "ALPHABETS",
    "Alphabet",
    "MindDecoder",
    "PosteriorTable",
    "bpsk",
    "build_alphabet",
    "decide",
    "decode",
    "entropies_from_posteriors",
    "estimate_entropies",
    "exact_posteriors",
    "genie_optimal_d",
    "log_likelihood_table",
    "map_oracle",
    "maxl_oracle",
    "mind_train",
    "mind_value_unsupervised",
    "noise_std_from_ebn0",
    "normalize_posteriors",
    "pam",
    "pam4_nonuniform",
    "pam_ser_awgn",
    "posterior",
    "symbol_error_rate",
]
