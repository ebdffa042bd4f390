//! Holds the `acceptance` test target and the pilot runs under `pilot/`.
