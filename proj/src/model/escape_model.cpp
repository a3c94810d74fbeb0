// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include "plt/error.hpp"
#include "plt/model.hpp"
#include "format.hpp"

namespace plt {

namespace {

class EscapeModel final : public GenerativeModel {
 public:
  EscapeModel(ModelPtr base, Rational epsilon) : base_(std::move(base)), epsilon_(std::move(epsilon)) {
    if (!base_) throw InvalidArgument("escape wrapper needs a base model");
    if (sgn(epsilon_) <= 0 || epsilon_ >= 1) throw InvalidArgument("escape probability must lie in (0, 1)");
  }

  const Vocabulary& vocabulary() const override { return base_->vocabulary(); }

  Distribution conditional(std::span<const Token> prefix) const override {
    return base_->conditional(prefix).with_escape(epsilon_, vocabulary().escape());
  }

  std::string serialize() const override {
    std::string out(format::kMagic);
    out += "\nkind escape\nepsilon " + to_string(epsilon_) + "\nbase\n";
    return out + base_->serialize();
  }

  std::string_view kind() const override { return "escape"; }

 private:
  ModelPtr base_;
  Rational epsilon_;
};

}  // namespace

ModelPtr with_escape(ModelPtr model, const Rational& epsilon) {
  return std::make_shared<EscapeModel>(std::move(model), epsilon);
}

}  // namespace plt
