package checkdigit

import "testing"

func TestLuhnVerify(t *testing.T) {
	p := NewLuhn()
	if !p.Verify("79927398713") {
		t.Fatal("expected a valid Luhn code")
	}
	if p.Verify("79927398710") {
		t.Fatal("expected an invalid Luhn code")
	}
}

func TestLuhnGenerate(t *testing.T) {
	p := NewLuhn()
	d, err := p.Generate("7992739871")
	if err != nil || d != 3 {
		t.Fatalf("got %d (%v), want 3", d, err)
	}
}
