"""NFT performance-analysis workbench.

Computes trait and image rarity, market/NFT/trader indicators, and per-NFT
transaction networks from collection snapshots, and serves them over a JSON
API.
"""

__version__ = "0.1.0"
