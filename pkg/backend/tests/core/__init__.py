# tests.core
