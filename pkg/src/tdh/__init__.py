"""Threshold Diffie-Hellman key exchange.

Two dealerless schemes over P-256 and Curve25519 — an n-of-n additive
scheme and a (t, n) scheme built on Feldman verifiable secret sharing —
exposed as round-based protocol state machines, plus the platform used
to run and evaluate them: a broadcast hub with private rooms, a broker
coordinating key-share agents, a network-condition emulator, an HTTP
service, and a benchmark CLI. A committee of agents acts as a single
virtual party whose private key is never reconstructed; it can derive
a pre-shared key jointly with an unmodified classic X25519 peer.
"""

__version__ = "0.1.0"
