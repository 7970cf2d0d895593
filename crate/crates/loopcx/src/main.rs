fn main() {
    std::process::exit(loopcx::cli::main_exit());
}
