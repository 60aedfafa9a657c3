fn main() {
    std::process::exit(orbit_incidence_cli::run(std::env::args_os()));
}
