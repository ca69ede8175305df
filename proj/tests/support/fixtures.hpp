#pragma once

#include <quadlift/parser.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef QUADLIFT_MODELS_DIR
#error "QUADLIFT_MODELS_DIR must be defined"
#endif

namespace fixtures {

inline std::string read_model(const std::string &name)
{
    const std::string path = std::string(QUADLIFT_MODELS_DIR) + "/" + name + ".ode";
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("missing model " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline quadlift::SystemAST load(const std::string &name)
{
    return quadlift::parse_system(read_model(name));
}

} // namespace fixtures
