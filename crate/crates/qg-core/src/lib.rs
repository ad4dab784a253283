pub mod acceptance;
pub mod category;
pub mod cbnorm;
pub mod corep;
pub mod doubles;
pub mod freeprod;
pub mod hopf_engine;
pub mod linalg;
