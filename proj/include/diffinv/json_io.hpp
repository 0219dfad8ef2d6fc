#ifndef DIFFINV_JSON_IO_HPP
#define DIFFINV_JSON_IO_HPP

#include <string>

#include "diffinv/diffop.hpp"

namespace diffinv {

// Operator document: {"dim": 1|2, "vars": [...], "coeffs": {"2,1": "expr"},
// "family": true|false}. Family operators may use the fiber coordinate y,
// which is appended to the declared base variables.
struct OperatorDoc {
    bool family = false;
    int dim = 0;
    LinDiffOp op;       // valid when !family
    OperatorFamily fam; // valid when family
};

OperatorDoc load_operator_text(const std::string& text);
OperatorDoc load_operator_file(const std::string& path);
std::string operator_json_text(const OperatorDoc& doc);
void save_operator_file(const std::string& path, const OperatorDoc& doc);

OperatorDoc doc_of(const LinDiffOp& op);
OperatorDoc doc_of(const OperatorFamily& fam);

} // namespace diffinv

#endif
