"""Tests for symbol alphabets and the Eb/N0 noise scale."""

import math

import numpy as np
import pytest

from mind.alphabet import Alphabet, bpsk, build_alphabet, noise_std_from_ebn0, pam, pam4_nonuniform
from models.errors import ConfigurationError


def test_pam_symbols_and_prior():
    alphabet = pam(4)
    assert alphabet.symbols.tolist() == [[-3.0, -1.0, 1.0, 3.0]]
    assert alphabet.prior.tolist() == [0.25] * 4
    assert alphabet.symbol_energy == pytest.approx(5.0)
    assert alphabet.bits_per_symbol == 2.0


def test_nonuniform_pam4_entropy():
    alphabet = pam4_nonuniform(0.05)
    assert alphabet.prior.tolist() == pytest.approx([0.475, 0.025, 0.475, 0.025])
    assert alphabet.entropy_bits == pytest.approx(1.2864, abs=1e-4)
    assert alphabet.symbol_energy == pytest.approx(5.0)


@pytest.mark.parametrize("p", [0.0, 0.05, 0.5, 1.0])
def test_nonuniform_pam4_keeps_uniform_symbol_energy(p):
    alphabet = pam4_nonuniform(p)
    rare = alphabet.prior[[1, 3]]
    assert rare.sum() == pytest.approx(p)
    assert alphabet.symbols[0, [1, 3]].tolist() == [-1.0, 3.0]
    assert alphabet.symbol_energy == pytest.approx(5.0)


@pytest.mark.parametrize(
    "symbols, prior",
    [
        ([1.0], [1.0]),
        ([1.0, -1.0], [0.5, 0.4]),
        ([1.0, -1.0], [1.5, -0.5]),
        ([1.0, 1.0], [0.5, 0.5]),
        ([1.0, -1.0, 0.0], [0.5, 0.5]),
    ],
)
def test_invalid_alphabets(symbols, prior):
    with pytest.raises(ConfigurationError):
        Alphabet(symbols=np.array(symbols), prior=np.array(prior))


@pytest.mark.parametrize("m", [0, 3])
def test_pam_order(m):
    with pytest.raises(ConfigurationError):
        pam(m)


def test_build_alphabet():
    assert build_alphabet("bpsk").m == 2
    assert build_alphabet("pam4").entropy_bits == pytest.approx(2.0)
    assert build_alphabet("pam4_nonuniform", p=0.5).prior.tolist() == [0.25] * 4
    with pytest.raises(ConfigurationError):
        build_alphabet("qam16")


def test_noise_std_from_ebn0():
    assert noise_std_from_ebn0(0.0, bpsk()) == pytest.approx(math.sqrt(0.5))
    # Es = 5, Eb = 2.5, Eb/N0 = 10
    assert noise_std_from_ebn0(10.0, pam(4)) == pytest.approx(math.sqrt(2.5 / 20.0))


def test_sampling_follows_the_prior(rng):
    indices, x = pam4_nonuniform(0.2).sample(100000, rng)
    assert x.shape == (1, 100000)
    assert np.array_equal(x[0], pam(4).symbols[0, indices])
    frequencies = np.bincount(indices, minlength=4) / indices.size
    assert frequencies == pytest.approx([0.4, 0.1, 0.4, 0.1], abs=0.01)
