pub mod lin;
pub mod exactalg;
pub mod signkoszul;
pub mod simpcx;
pub mod cobarloop;
pub mod hochschild;
pub mod freeloop;
pub mod boxquot;
pub mod ledger;
pub mod suites;
pub mod cli;
