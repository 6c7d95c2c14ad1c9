fn main() {
    std::process::exit(oalg::cli::run(std::env::args_os()));
}
