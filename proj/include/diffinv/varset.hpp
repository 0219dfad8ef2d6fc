#ifndef DIFFINV_VARSET_HPP
#define DIFFINV_VARSET_HPP

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace diffinv {

// Ordered list of variable names. The order is fixed for the lifetime of a
// computation session: monomial orders and canonical forms depend on it.
// Cheap to copy (shared immutable storage).
class VarSet {
public:
    VarSet() : names_(std::make_shared<const std::vector<std::string>>()) {}

    explicit VarSet(std::vector<std::string> names)
        : names_(std::make_shared<const std::vector<std::string>>(std::move(names))) {
        for (size_t i = 0; i < names_->size(); ++i)
            for (size_t j = i + 1; j < names_->size(); ++j)
                if ((*names_)[i] == (*names_)[j])
                    throw std::invalid_argument("duplicate variable name: " + (*names_)[i]);
    }

    size_t size() const { return names_->size(); }
    const std::string& name(size_t i) const { return (*names_)[i]; }
    const std::vector<std::string>& names() const { return *names_; }

    std::optional<size_t> index_of(const std::string& n) const {
        for (size_t i = 0; i < names_->size(); ++i)
            if ((*names_)[i] == n) return i;
        return std::nullopt;
    }

    size_t require(const std::string& n) const {
        if (auto i = index_of(n)) return *i;
        throw std::invalid_argument("unknown variable: " + n);
    }

    bool operator==(const VarSet& o) const {
        return names_ == o.names_ || *names_ == *o.names_;
    }
    bool operator!=(const VarSet& o) const { return !(*this == o); }

    // New VarSet with extra names appended (existing names must not repeat).
    VarSet extended(const std::vector<std::string>& extra) const {
        std::vector<std::string> v = *names_;
        v.insert(v.end(), extra.begin(), extra.end());
        return VarSet(std::move(v));
    }

    // True if every name of sub occurs here.
    bool contains_all(const VarSet& sub) const {
        for (const auto& n : sub.names())
            if (!index_of(n)) return false;
        return true;
    }

    // For each variable of sub, its index here. Throws if missing.
    std::vector<size_t> embedding_of(const VarSet& sub) const {
        std::vector<size_t> m;
        m.reserve(sub.size());
        for (const auto& n : sub.names()) m.push_back(require(n));
        return m;
    }

private:
    std::shared_ptr<const std::vector<std::string>> names_;
};

// Union preserving a's order, b's new names appended in b's order.
inline VarSet unify(const VarSet& a, const VarSet& b) {
    std::vector<std::string> extra;
    for (const auto& n : b.names())
        if (!a.index_of(n)) extra.push_back(n);
    return extra.empty() ? a : a.extended(extra);
}

} // namespace diffinv

#endif
