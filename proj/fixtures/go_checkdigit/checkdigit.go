// Package checkdigit provides check digit algorithms for numeric codes.
package checkdigit

import "errors"

// ErrInvalidArgument is returned when a code contains a non-digit rune.
var ErrInvalidArgument = errors.New("checkdigit: invalid argument")

// Provider generates and verifies a check digit for a numeric code.
type Provider interface {
	Verify(code string) bool
	Generate(seed string) (int, error)
}

// isNumber reports whether every rune in s is an ASCII digit.
func isNumber(s string) bool {
	if s == "" {
		return false
	}
	for _, r := range s {
		if r < '0' || r > '9' {
			return false
		}
	}
	return true
}

type luhn struct{}

// NewLuhn returns a Provider implementing the Luhn algorithm.
func NewLuhn() Provider { return luhn{} }

func (l luhn) Verify(code string) bool {
	if len(code) < 2 || !isNumber(code) {
		return false
	}
	sum, double := 0, false
	for i := len(code) - 1; i >= 0; i-- {
		d := int(code[i] - '0')
		if double {
			d *= 2
			if d > 9 {
				d -= 9
			}
		}
		sum += d
		double = !double
	}
	return sum%10 == 0
}

func (l luhn) Generate(seed string) (int, error) {
	if !isNumber(seed) {
		return 0, ErrInvalidArgument
	}
	sum, double := 0, true
	for i := len(seed) - 1; i >= 0; i-- {
		d := int(seed[i] - '0')
		if double {
			d *= 2
			if d > 9 {
				d -= 9
			}
		}
		sum += d
		double = !double
	}
	return (10 - sum%10) % 10, nil
}
