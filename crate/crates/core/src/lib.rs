pub mod algebra;
pub mod bivar;
pub mod linalg;
pub mod modules;
pub mod oracle;
pub mod padic;
pub mod powseries;
pub mod primes;
pub mod result;
