//! Case studies (placeholder).
