"""Single-qubit randomized benchmarking under the Clifford and NIST gatesets."""

__version__ = "0.1.0"
