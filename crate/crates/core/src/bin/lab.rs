fn main() {
    println!("lab: under construction");
}
