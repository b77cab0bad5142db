//! Benchmark-only package; the measurements live in `benches/round_trip.rs`.
