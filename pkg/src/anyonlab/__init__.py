"""anyonlab: a numerical laboratory for Majorana braiding and anyon models.

Subsystems:

* majorana_algebra - exact symbolic monomial/braid algebra
* fock_simulator   - dense fermionic state-vector backend
* qubit_encoding   - 4-Majorana-per-qubit logical layer
* protocols        - magic-state-assisted non-Clifford gates
* honeycomb        - spin-lattice model: dispersion, phases, exact diagonalization
* toric_code       - square-lattice stabilizer model and anyon braiding
* service / cli    - FastAPI wrapper and thin command-line client
"""

__version__ = "0.1.0"
