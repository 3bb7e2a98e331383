"""Independent checking of candidate coordinators and brute-force coordinator enumeration."""
