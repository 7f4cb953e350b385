//! Home of the `acceptance` test target, which checks each acceptance
//! criterion and prints one PASS/FAIL line for it.
