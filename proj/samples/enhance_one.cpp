// Minimal library usage: enhance one file and print the cycle trace.
//
//   enhance_one input.png output.png

#include <iostream>

#include "vplume/vplume.hpp"

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: " << argv[0] << " <input> <output>\n";
        return 2;
    }
    try {
        const vplume::RgbImage input = vplume::load_image(argv[1]);
        vplume::EnhanceConfig cfg;
        const auto result = vplume::enhance(input, cfg);
        vplume::save_image(result.output, argv[2]);

        for (const auto& c : result.trace.cycles) {
            std::cout << "K=" << c.k << " T=" << c.t << " beta=" << c.beta << " gamma=" << c.gamma
                      << " theta=" << c.theta << " U=" << c.u << "\n";
        }
        std::cout << "stop: " << vplume::to_string(result.trace.stop_reason) << "\n";
    } catch (const vplume::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
