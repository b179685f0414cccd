// Registry of homotopy-group facts used as computation inputs. Every fact is
// a record in a human-readable data file carrying its literature citation, so
// downstream arithmetic is data-driven and auditable. The registry stores; it
// never derives.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "fiblab/errors.hpp"
#include "fiblab/fgab.hpp"

namespace fiblab::registry {

// One registry record: a group (possibly trivial for scalar facts whose
// payload lives in params), generator labels, and a mandatory source string.
struct GroupCitation {
    std::string key;
    std::map<std::string, long long> params;
    fgab::AbGroup group;
    std::vector<std::string> generator_labels;
    std::string source;

    // Convenience accessor for scalar payloads (e.g. value=2, pm=1).
    long long param(const std::string& name) const;
    bool has_param(const std::string& name) const;
};

// Record file grammar, line-oriented UTF-8:
//   key | params | free_rank | torsion-list | generator-labels | source
// where params is a comma list of name=integer (or "-"), torsion-list is a
// comma list of integers >= 2 (or "-"), labels are ';'-separated (or "-"),
// and source is free text (mandatory). '#' starts a comment; blank lines
// are skipped. Torsion lists are canonicalized to invariant factors on load
// (e.g. "8,9,7" becomes Z_504). Duplicate (key, params) pairs are an error.
class Registry {
  public:
    static Registry load_file(const std::string& path);
    static Registry parse(const std::string& text, const std::string& origin);

    // Matches on key plus a subset of params: every query param must appear in
    // the record with the same value, and records may carry extra payload
    // params (value=, epi=, ...). Zero matches throw UnknownKey, two or more
    // throw InvalidArgument; nothing is ever fabricated. The key "i_*(K)"
    // routes to attaching_kernel_image using params k and n.
    GroupCitation lookup(const std::string& key,
                         const std::map<std::string, long long>& params = {}) const;
    bool has(const std::string& key,
             const std::map<std::string, long long>& params = {}) const;

    size_t size() const { return records_.size(); }
    const std::vector<GroupCitation>& records() const { return records_; }

  private:
    std::vector<GroupCitation> records_;
};

// The cyclic group i_*(K) in which the top-cell coefficient m is measured,
// with its distinguished generator:
//   k in {2,4}:           Z_n   generated by [X_{2k}, iota_{2k-1}]_r
//   k not in {2,4}, 2|n:  Z_2n  generated by [X_{2k}, iota_{2k-1}]_r
//   k not in {2,4}, 2∤n:  Z_n   generated by 2[X_{2k}, iota_{2k-1}]_r
fgab::AbGroup attaching_kernel_image_group(long long k, long long n);
GroupCitation attaching_kernel_image(long long k, long long n);

// Modulus of the a-coordinate of an attaching descriptor: n when k in {2,4},
// 2n otherwise.
long long coefficient_modulus(long long k, long long n);

// Index of the image of the Hopf invariant on the relevant homotopy group:
// 1 when k in {2,4}, 2 otherwise.
long long hopf_image_stride(long long k);

}  // namespace fiblab::registry
