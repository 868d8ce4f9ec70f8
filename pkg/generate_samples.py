"""
Generate sample problem files for the c_estimate command
"""
from pathlib import Path

import numpy as np

from reduction.problems import ProblemFile
from reduction.sampling import random_povm, random_projector
from reduction.states import Povm, Projector

OUTPUT_DIR = Path("sample_problems")


def ketbra(v):
    return np.outer(v, np.conj(v))


def create_plus_minus():
    """|+⟩⟨+|, |−⟩⟨−| against Π = |0⟩⟨0|: maximal off-diagonal weight, c = 1"""
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    povm = Povm.from_dict({(0, 0): ketbra(plus), (1, 0): ketbra(minus)})
    return ProblemFile.from_operators(povm, Projector.from_indices(2, [0]))


def create_block_diagonal():
    """Computational-basis measurement in dimension 4, Π on the first two levels: c = 0"""
    basis = np.eye(4)
    povm = Povm.from_dict({
        (0, 0): ketbra(basis[0]) + ketbra(basis[2]),
        (1, 0): ketbra(basis[1]) + ketbra(basis[3]),
    })
    return ProblemFile.from_operators(povm, Projector.from_indices(4, [0, 1]))


def create_nested(seed=40):
    """Random 4-outcome POVM in dimension 40, rank-4 Π inside the first 8 levels"""
    rng = np.random.default_rng(seed)
    povm = random_povm(40, 4, 2, 2, rng)
    embedded = np.zeros((40, 40), dtype=complex)
    embedded[:8, :8] = random_projector(8, 4, rng).matrix
    return ProblemFile.from_operators(povm, Projector(embedded), nested_dims=[8, 16, 24, 32, 40])


if __name__ == "__main__":
    OUTPUT_DIR.mkdir(exist_ok=True)
    samples = {
        "plus_minus.json": create_plus_minus(),
        "block_diagonal.json": create_block_diagonal(),
        "nested_dim40.json": create_nested(),
    }
    for name, problem in samples.items():
        (OUTPUT_DIR / name).write_bytes(problem.dumps())
        print(f"✅ Created {OUTPUT_DIR / name}")

    print("\n✅ All sample problems generated successfully!")
    print("Try: python manage.py c_estimate sample_problems/nested_dim40.json --nested")
