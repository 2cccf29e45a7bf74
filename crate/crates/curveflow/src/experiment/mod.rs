//! Config-driven experiment runner.
