#pragma once

#include <map>
#include <string>

namespace csd {

enum class Method { SN, LN, TC, LM_BP, LM_PUY, LM_FJLX, CD_P };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct TestOutcome {
    Method method{};
    double statistic = 0.0;
    double p_value = 1.0;
    double alpha = 0.05;
    bool reject = false;
    std::map<std::string, double> aux;
};

}  // namespace csd
