//! Representations of order c (placeholder).
