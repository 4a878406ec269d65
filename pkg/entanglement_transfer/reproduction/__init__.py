"""Parameter sweeps that regenerate the entanglement curves as CSV tables
and gnuplot scripts."""
