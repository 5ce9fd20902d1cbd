values.add(29);
helper2(v1);
assertEquals(1, v2);
String s4 = builder.toString();
String s5 = builder.toString();
for (String item6 : items) {
    obj.method7();
}
for (String item8 : items) {
    obj.method9();
    assertEquals(6, v9);
    String s11 = builder.toString();
}
assertEquals(1, v11);
