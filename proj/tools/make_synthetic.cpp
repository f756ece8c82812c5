// Writes the bundled synthetic test corpus as binary PGM files.
#include <filesystem>
#include <iostream>

#include "ploc/netpbm.hpp"
#include "ploc/synthetic.hpp"

int main(int argc, char** argv)
{
    const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
    std::filesystem::create_directories(dir);
    for (const auto& [name, image] : ploc::synthetic::corpus()) {
        const auto path = dir / (name + ".pgm");
        ploc::write_file(path, ploc::encode_pgm(image));
        std::cout << path.string() << "\n";
    }
    return 0;
}
