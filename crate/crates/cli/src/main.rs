fn main() {
    println!("cycleforge");
}
