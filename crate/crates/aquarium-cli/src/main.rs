fn main() {
    std::process::exit(aquarium_cli::dispatch(std::env::args()));
}
