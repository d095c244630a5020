#include "csd/outcome.hpp"

#include "csd/errors.hpp"

namespace csd {

const char* method_name(Method m) {
    switch (m) {
        case Method::SN: return "S_N";
        case Method::LN: return "L_N";
        case Method::TC: return "T_C";
        case Method::LM_BP: return "LM_BP";
        case Method::LM_PUY: return "LM_PUY";
        case Method::LM_FJLX: return "LM_FJLX";
        case Method::CD_P: return "CD_P";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "S_N") return Method::SN;
    if (name == "L_N") return Method::LN;
    if (name == "T_C") return Method::TC;
    if (name == "LM_BP") return Method::LM_BP;
    if (name == "LM_PUY") return Method::LM_PUY;
    if (name == "LM_FJLX") return Method::LM_FJLX;
    if (name == "CD_P") return Method::CD_P;
    throw DomainError("unknown method name: " + name);
}

}  // namespace csd
