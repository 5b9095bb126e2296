fn main() {
    std::process::exit(fermat_torus_cli::run(std::env::args_os()));
}
